/* Copyright 2026 The ivbeta Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

	http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
--------------------------------------------------------------------------------------------------------------*/


#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <ivbeta/toytrain.hpp>

using namespace ivbeta;

namespace {

TrainConfig small_config( std::uint64_t seed )
{
	TrainConfig c;
	c.seed = seed;
	c.nTrain = 300;
	c.nVal = 0;
	c.nTest = 300;
	c.epochs = 5;
	return c;
}

// Every weight and bias of a head, in layer order, as mutable pointers.
std::vector<double*> parameters( HeadWeights& head )
{
	std::vector<double*> out;
	for( auto& l : head.layers ) {
		for( double& w : l.weights ) {
			out.push_back( &w );
		}
		for( double& b : l.bias ) {
			out.push_back( &b );
		}
	}
	return out;
}

} // namespace

TEST( Synthetic, NoiselessFirstFeatureIsLatent )
{
	TrainConfig c = small_config( 1 );
	c.featureNoiseSigma = 0.0;
	for( const SyntheticSample& s : gen_synthetic( 500, c ) ) {
		EXPECT_EQ( s.features[0], s.latent );
		EXPECT_EQ( s.features.size(), 4u );
		EXPECT_EQ( s.cleanLabel, c.thresholds.quantize( s.latent ) );
		EXPECT_EQ( s.observedLabel, s.cleanLabel );
	}
}

TEST( Synthetic, ClassFrequenciesFollowIntervalWidths )
{
	TrainConfig c = small_config( 2 );
	const std::size_t n = 30000;
	const Dataset data = gen_synthetic( n, c );
	std::vector<double> counts( 3, 0.0 );
	for( const auto& s : data ) {
		counts[s.cleanLabel - 1] += 1.0;
	}
	const double p = 1.0 / 3.0;
	const double sd = std::sqrt( n * p * ( 1 - p ) );
	for( double k : counts ) {
		EXPECT_LT( std::fabs( k - n * p ), 3.0 * sd );
	}
}

TEST( Synthetic, StreamsAreDeterministicAndDistinct )
{
	const TrainConfig c = small_config( 3 );
	EXPECT_EQ( gen_synthetic( 50, c, stream::kTrain ), gen_synthetic( 50, c, stream::kTrain ) );
	EXPECT_NE( gen_synthetic( 50, c, stream::kTrain ), gen_synthetic( 50, c, stream::kTest ) );
	TrainConfig d = c;
	d.seed = 4;
	EXPECT_NE( gen_synthetic( 50, c ), gen_synthetic( 50, d ) );
}

TEST( Noisify, FlipsExactCountOfAdjacentLabels )
{
	TrainConfig c = small_config( 5 );
	Dataset data = gen_synthetic( 2000, c );
	const NoisyAnnotations noisy = noisify_dataset( data, 3, 0.1, 99 );
	EXPECT_EQ( noisy.flips.size(), 200u );
	std::size_t changed = 0;
	for( const auto& s : data ) {
		if( s.observedLabel != s.cleanLabel ) {
			++changed;
			EXPECT_EQ( std::abs( s.observedLabel - s.cleanLabel ), 1 );
		}
	}
	EXPECT_EQ( changed, 200u );
}

TEST( Heads, ShapesAndInitDeterminism )
{
	const TrainConfig c = small_config( 6 );
	const HeadWeights beta = init_head( HeadKind::Beta, c );
	const HeadWeights soft = init_head( HeadKind::Softmax, c );
	EXPECT_EQ( beta.output_dims(), 2u );
	EXPECT_EQ( soft.output_dims(), 3u );
	EXPECT_EQ( beta.parameter_count(), 4u * 16 + 16 + 16 * 2 + 2 );
	EXPECT_EQ( beta, init_head( HeadKind::Beta, c ) );
	const auto p = head_probs( beta, gen_synthetic( 1, c )[0].features, c );
	EXPECT_NEAR( std::accumulate( p.begin(), p.end(), 0.0 ), 1.0, 1e-12 );
}

TEST( Heads, ZeroEpochsReturnInitialWeights )
{
	TrainConfig c = small_config( 7 );
	c.epochs = 0;
	const Dataset data = gen_synthetic( c.nTrain, c );
	EXPECT_EQ( train_beta_head( data, c ).weights, init_head( HeadKind::Beta, c ) );
	EXPECT_EQ( train_softmax_head( data, c ).weights, init_head( HeadKind::Softmax, c ) );
	EXPECT_TRUE( train_beta_head( data, c ).lossHistory.empty() );
}

TEST( Heads, ParameterGradientMatchesFiniteDifferences )
{
	std::mt19937_64 rng( 11 );
	std::uniform_int_distribution<std::size_t> pickSample( 0, 199 );
	double worst = 0.0;
	for( int trial = 0; trial < 50; ++trial ) {
		TrainConfig c = small_config( 100 + trial );
		c.hiddenDims = trial % 3 == 0 ? std::vector<std::size_t>{ 8, 5 } : std::vector<std::size_t>{ 6 };
		c.focal.gamma = ( trial % 4 ) * 0.75;
		c.focal.lambda_weight = trial % 5 == 0 ? 0.5 : 1.0;
		const Dataset data = gen_synthetic( 200, c );
		std::vector<std::size_t> batch;
		for( int i = 0; i < 8; ++i ) {
			batch.push_back( pickSample( rng ) );
		}
		HeadWeights head = init_head( trial % 2 ? HeadKind::Softmax : HeadKind::Beta, c );
		HeadWeights grad;
		batch_loss_grad( head, data, batch, c, grad );
		const auto params = parameters( head );
		const auto analytic = parameters( grad );
		std::uniform_int_distribution<std::size_t> pickParam( 0, params.size() - 1 );
		HeadWeights scratch;
		for( int k = 0; k < 10; ++k ) {
			const std::size_t p = pickParam( rng );
			const double saved = *params[p];
			const double h = 1e-5;
			*params[p] = saved + h;
			const double up = batch_loss_grad( head, data, batch, c, scratch );
			*params[p] = saved - h;
			const double down = batch_loss_grad( head, data, batch, c, scratch );
			*params[p] = saved;
			const double fd = ( up - down ) / ( 2 * h );
			const double err = std::fabs( *analytic[p] - fd ) / std::max( 1e-3, std::fabs( fd ) );
			worst = std::max( worst, err );
			EXPECT_LT( err, 1e-4 ) << "trial " << trial << " param " << p << " analytic " << *analytic[p] << " fd " << fd;
		}
	}
	RecordProperty( "worst_relative_error", std::to_string( worst ) );
}

TEST( Training, LossDecreases )
{
	const TrainConfig c = small_config( 8 );
	const Dataset data = gen_synthetic( c.nTrain, c );
	for( const TrainedHead& t : { train_beta_head( data, c ), train_softmax_head( data, c ) } ) {
		ASSERT_EQ( t.lossHistory.size(), 5u );
		EXPECT_LT( t.lossHistory.back(), t.lossHistory.front() );
	}
}

TEST( Training, SeparableDataIsLearned )
{
	TrainConfig c;
	c.seed = 9;
	c.featureNoiseSigma = 0.0;
	c.distractorDims = 0;
	c.nTrain = 2000;
	c.nTest = 1000;
	c.epochs = 150;
	c.learningRate = 0.2;
	c.focal.gamma = 0.0;
	const DataSplits s = make_splits( c );
	EXPECT_GE( evaluate_head( train_beta_head( s.train, c ).weights, s.test, c ).accuracy, 0.97 );
	EXPECT_GE( evaluate_head( train_softmax_head( s.train, c ).weights, s.test, c ).accuracy, 0.97 );
}

TEST( Training, DeterministicAcrossRuns )
{
	const TrainConfig c = small_config( 10 );
	const Dataset data = gen_synthetic( c.nTrain, c );
	EXPECT_EQ( train_beta_head( data, c ).weights, train_beta_head( data, c ).weights );
	EXPECT_EQ( train_softmax_head( data, c ).lossHistory, train_softmax_head( data, c ).lossHistory );
}

TEST( Training, DivergenceIsReported )
{
	TrainConfig c = small_config( 12 );
	c.learningRate = 1e307;
	const Dataset data = gen_synthetic( c.nTrain, c );
	EXPECT_THROW( train_softmax_head( data, c ), DivergenceError );
	EXPECT_THROW( train_beta_head( data, c ), DivergenceError );
}

TEST( Experiment, ZeroNoiseGivesZeroDrop )
{
	TrainConfig c = small_config( 13 );
	const ExperimentReport r = run_noise_experiment( c, 0.0, 2, 2 );
	EXPECT_EQ( r.flipCounts, ( std::vector<std::size_t>{ 0, 0 } ) );
	for( const HeadSummary* h : { &r.beta, &r.softmax } ) {
		ASSERT_EQ( h->perSeed.size(), 2u );
		for( const SeedOutcome& o : h->perSeed ) {
			EXPECT_EQ( o.clean, o.noisy );
		}
		EXPECT_EQ( h->meanDrop, 0.0 );
	}
}

TEST( Experiment, ThreadCountDoesNotChangeResults )
{
	TrainConfig c = small_config( 14 );
	c.epochs = 2;
	const ExperimentReport one = run_noise_experiment( c, 0.1, 3, 1 );
	const ExperimentReport many = run_noise_experiment( c, 0.1, 3, 4 );
	EXPECT_EQ( report_json( one ), report_json( many ) );
	EXPECT_EQ( one.flipCounts, ( std::vector<std::size_t>{ 30, 30, 30 } ) );
	EXPECT_TRUE( one.flipsAdjacent );
}

TEST( Experiment, TextReportColumns )
{
	TrainConfig c = small_config( 15 );
	c.epochs = 1;
	const std::string text = report_text( run_noise_experiment( c, 0.1, 1, 1 ) );
	for( const char* col : { "Clean", "Noise", "Abs. Drop", "% Drop", "Beta", "Softmax" } ) {
		EXPECT_NE( text.find( col ), std::string::npos ) << col;
	}
}

TEST( Config, Validation )
{
	TrainConfig c;
	c.batchSize = 0;
	EXPECT_THROW( c.validate(), std::invalid_argument );
	c = TrainConfig{};
	c.epochs = -1;
	EXPECT_THROW( c.validate(), std::invalid_argument );
	EXPECT_THROW( gen_synthetic( 0, TrainConfig{} ), std::invalid_argument );
}
