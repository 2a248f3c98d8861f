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

#pragma once

// Desk-scale label-noise experiment. Samples carry a uniform latent maturity m;
// the first feature is m plus gaussian noise and the remaining features are
// pure noise. Two small MLP heads are trained by mini-batch gradient descent:
// a Beta head (two raw outputs -> softplus shapes -> interval probabilities)
// and a softmax head, both under focal loss with the same gamma.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <exception>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include <ivbeta/annotations.hpp>
#include <ivbeta/matchagree.hpp>
#include <ivbeta/maturity.hpp>
#include <ivbeta/noise.hpp>

namespace ivbeta {

enum class HeadKind { Beta, Softmax };

inline std::string head_name( HeadKind kind )
{
	return kind == HeadKind::Beta ? "beta" : "softmax";
}

struct TrainConfig {
	std::uint64_t seed = 0;
	int epochs = 40;
	std::size_t batchSize = 32;
	double learningRate = 0.05;
	std::vector<std::size_t> hiddenDims{ 16 };
	FocalConfig focal;
	ThresholdSchedule thresholds = ThresholdSchedule::equal( 3 );
	double featureNoiseSigma = 0.05;
	std::size_t distractorDims = 3;
	std::size_t nTrain = 2000;
	std::size_t nVal = 500;
	std::size_t nTest = 2000;
	double epsilon = kDefaultEpsilon;

	std::size_t feature_dims() const { return 1 + distractorDims; }

	void validate() const
	{
		focal.validate();
		if( epochs < 0 ) {
			throw std::invalid_argument( "epochs must be non-negative" );
		}
		if( batchSize == 0 ) {
			throw std::invalid_argument( "batch size must be positive" );
		}
		if( !std::isfinite( learningRate ) || learningRate <= 0.0 ) {
			throw std::invalid_argument( "learning rate must be finite and positive" );
		}
		for( std::size_t h : hiddenDims ) {
			if( h == 0 ) {
				throw std::invalid_argument( "hidden layer widths must be positive" );
			}
		}
		if( !std::isfinite( featureNoiseSigma ) || featureNoiseSigma < 0.0 ) {
			throw std::invalid_argument( "feature noise sigma must be finite and non-negative" );
		}
		if( nTrain == 0 || nTest == 0 ) {
			throw std::invalid_argument( "train and test set sizes must be positive" );
		}
		if( !std::isfinite( epsilon ) || epsilon <= 0.0 ) {
			throw std::invalid_argument( "epsilon must be finite and positive" );
		}
	}
};

struct SyntheticSample {
	double latent = 0.0;
	std::vector<double> features;
	int cleanLabel = 1;
	int observedLabel = 1;

	friend bool operator==( const SyntheticSample&, const SyntheticSample& ) = default;
};

using Dataset = std::vector<SyntheticSample>;

/// Independent random streams derived from one seed; `stream` separates the
/// splits and the heads so that no two consumers share draws.
inline std::mt19937_64 make_rng( std::uint64_t seed, std::uint64_t stream )
{
	std::seed_seq seq{ static_cast<std::uint32_t>( seed ), static_cast<std::uint32_t>( seed >> 32 ),
		static_cast<std::uint32_t>( stream ), static_cast<std::uint32_t>( stream >> 32 ) };
	return std::mt19937_64( seq );
}

namespace stream {
inline constexpr std::uint64_t kTrain = 1;
inline constexpr std::uint64_t kVal = 2;
inline constexpr std::uint64_t kTest = 3;
inline constexpr std::uint64_t kNoise = 4;
inline constexpr std::uint64_t kBetaHead = 10;
inline constexpr std::uint64_t kSoftmaxHead = 11;
} // namespace stream

inline Dataset gen_synthetic( std::size_t n, const TrainConfig& config, std::uint64_t streamId = stream::kTrain )
{
	if( n == 0 ) {
		throw std::invalid_argument( "gen_synthetic: n must be at least 1" );
	}
	std::mt19937_64 rng = make_rng( config.seed, streamId );
	std::uniform_real_distribution<double> unit( 0.0, 1.0 );
	std::normal_distribution<double> gauss( 0.0, 1.0 );
	Dataset data( n );
	for( SyntheticSample& s : data ) {
		s.latent = unit( rng );
		s.features.resize( config.feature_dims() );
		s.features[0] = s.latent + config.featureNoiseSigma * gauss( rng );
		for( std::size_t d = 1; d < s.features.size(); ++d ) {
			s.features[d] = gauss( rng );
		}
		s.cleanLabel = config.thresholds.quantize( s.latent );
		s.observedLabel = s.cleanLabel;
	}
	return data;
}

struct DataSplits {
	Dataset train;
	Dataset val;
	Dataset test;
};

inline DataSplits make_splits( const TrainConfig& config )
{
	DataSplits s;
	s.train = gen_synthetic( config.nTrain, config, stream::kTrain );
	if( config.nVal > 0 ) {
		s.val = gen_synthetic( config.nVal, config, stream::kVal );
	}
	s.test = gen_synthetic( config.nTest, config, stream::kTest );
	return s;
}

/// Applies adjacent-class noise to the observed labels of a dataset through the
/// annotation-level injector (one pseudo-image, one instance per sample).
inline NoisyAnnotations noisify_dataset( Dataset& data, int classes, double rate, std::uint64_t seed )
{
	AnnotationSet set;
	set.num_classes = classes;
	auto& instances = set.images[0];
	for( std::size_t i = 0; i < data.size(); ++i ) {
		instances.push_back( { static_cast<AnnotationId>( i ), { 0.0, 0.0, 1.0, 1.0 }, data[i].observedLabel, {} } );
	}
	NoisyAnnotations noisy = inject_noise( set, { rate, seed, false } );
	const auto& out = noisy.annotations.images.at( 0 );
	for( std::size_t i = 0; i < data.size(); ++i ) {
		data[i].observedLabel = out[i].label;
	}
	return noisy;
}

/// Fully connected layer y = W x + b with W stored row-major (out x in).
struct DenseLayer {
	std::size_t in = 0;
	std::size_t out = 0;
	std::vector<double> weights;
	std::vector<double> bias;

	friend bool operator==( const DenseLayer&, const DenseLayer& ) = default;
};

/// Feed-forward map with tanh hidden activations and a linear output layer.
struct HeadWeights {
	HeadKind kind = HeadKind::Beta;
	std::vector<DenseLayer> layers;

	std::size_t output_dims() const { return layers.empty() ? 0 : layers.back().out; }

	std::size_t parameter_count() const
	{
		std::size_t n = 0;
		for( const auto& l : layers ) {
			n += l.weights.size() + l.bias.size();
		}
		return n;
	}

	bool all_finite() const
	{
		for( const auto& l : layers ) {
			for( double w : l.weights ) {
				if( !std::isfinite( w ) ) {
					return false;
				}
			}
			for( double b : l.bias ) {
				if( !std::isfinite( b ) ) {
					return false;
				}
			}
		}
		return true;
	}

	friend bool operator==( const HeadWeights&, const HeadWeights& ) = default;
};

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases.
inline HeadWeights init_head( HeadKind kind, const TrainConfig& config )
{
	const std::size_t outDims = kind == HeadKind::Beta ? 2 : static_cast<std::size_t>( config.thresholds.classes() );
	std::mt19937_64 rng = make_rng( config.seed, kind == HeadKind::Beta ? stream::kBetaHead : stream::kSoftmaxHead );
	HeadWeights head;
	head.kind = kind;
	std::vector<std::size_t> dims{ config.feature_dims() };
	dims.insert( dims.end(), config.hiddenDims.begin(), config.hiddenDims.end() );
	dims.push_back( outDims );
	for( std::size_t i = 0; i + 1 < dims.size(); ++i ) {
		DenseLayer layer{ dims[i], dims[i + 1], std::vector<double>( dims[i] * dims[i + 1] ),
			std::vector<double>( dims[i + 1] ) };
		const double r = 1.0 / std::sqrt( static_cast<double>( dims[i] ) );
		std::uniform_real_distribution<double> u( -r, r );
		for( double& w : layer.weights ) {
			w = u( rng );
		}
		for( double& b : layer.bias ) {
			b = u( rng );
		}
		head.layers.push_back( std::move( layer ) );
	}
	return head;
}

namespace detail {

// Activations of every layer: acts[0] is the input, acts.back() the raw output.
inline std::vector<std::vector<double>> forward_all( const HeadWeights& head, const std::vector<double>& x )
{
	std::vector<std::vector<double>> acts{ x };
	for( std::size_t li = 0; li < head.layers.size(); ++li ) {
		const DenseLayer& l = head.layers[li];
		const std::vector<double>& in = acts.back();
		std::vector<double> out( l.bias );
		for( std::size_t o = 0; o < l.out; ++o ) {
			const double* row = &l.weights[o * l.in];
			for( std::size_t i = 0; i < l.in; ++i ) {
				out[o] += row[i] * in[i];
			}
			if( li + 1 < head.layers.size() ) {
				out[o] = std::tanh( out[o] );
			}
		}
		acts.push_back( std::move( out ) );
	}
	return acts;
}

// Accumulates scale * dL/dparams into grad given dL/d(raw output).
inline void backward_accumulate( const HeadWeights& head, const std::vector<std::vector<double>>& acts,
	std::vector<double> delta, double scale, HeadWeights& grad )
{
	for( std::size_t li = head.layers.size(); li-- > 0; ) {
		const DenseLayer& l = head.layers[li];
		DenseLayer& g = grad.layers[li];
		const std::vector<double>& in = acts[li];
		std::vector<double> prev( l.in, 0.0 );
		for( std::size_t o = 0; o < l.out; ++o ) {
			const double d = delta[o];
			g.bias[o] += scale * d;
			const double* row = &l.weights[o * l.in];
			double* grow = &g.weights[o * l.in];
			for( std::size_t i = 0; i < l.in; ++i ) {
				grow[i] += scale * d * in[i];
				prev[i] += d * row[i];
			}
		}
		if( li > 0 ) {
			// tanh' = 1 - tanh^2 on the previous layer's activations
			for( std::size_t i = 0; i < l.in; ++i ) {
				prev[i] *= 1.0 - in[i] * in[i];
			}
		}
		delta = std::move( prev );
	}
}

inline HeadWeights zeros_like( const HeadWeights& head )
{
	HeadWeights z = head;
	for( auto& l : z.layers ) {
		std::fill( l.weights.begin(), l.weights.end(), 0.0 );
		std::fill( l.bias.begin(), l.bias.end(), 0.0 );
	}
	return z;
}

struct OutputLoss {
	double loss = 0.0;
	std::vector<double> dRaw;
};

// Focal loss of softmax(z) at `label`, differentiated through log-softmax so
// that no probability clamp is needed.
inline OutputLoss softmax_focal( const std::vector<double>& z, int label, double gamma )
{
	const std::size_t k = static_cast<std::size_t>( label - 1 );
	const double zmax = *std::max_element( z.begin(), z.end() );
	double total = 0.0;
	double others = 0.0;
	std::vector<double> e( z.size() );
	for( std::size_t j = 0; j < z.size(); ++j ) {
		e[j] = std::exp( z[j] - zmax );
		total += e[j];
		if( j != k ) {
			others += e[j];
		}
	}
	const double lnP = ( z[k] - zmax ) - std::log( total );
	const double p = e[k] / total;
	const double q = others / total;
	const double weight = gamma == 0.0 ? 1.0 : std::pow( q, gamma );
	OutputLoss out;
	out.loss = -weight * lnP;
	// dL/dz_j = (delta_jk - p_j) * (dL/dlnP + p * dL/dq with dq = -p dlnP)
	double common = -weight;
	if( gamma != 0.0 && q > 0.0 ) {
		common += gamma * std::pow( q, gamma - 1.0 ) * lnP * p;
	}
	out.dRaw.resize( z.size() );
	for( std::size_t j = 0; j < z.size(); ++j ) {
		const double pj = e[j] / total;
		out.dRaw[j] = ( ( j == k ? 1.0 : 0.0 ) - pj ) * common;
	}
	return out;
}

inline OutputLoss output_loss( const HeadWeights& head, const std::vector<double>& raw, int label,
	const TrainConfig& config )
{
	if( head.kind == HeadKind::Softmax ) {
		return softmax_focal( raw, label, config.focal.gamma );
	}
	const RawLossGrad g = loss_grad( raw[0], raw[1], label, config.thresholds, config.focal, config.epsilon );
	return { g.loss, { g.dRaw1, g.dRaw2 } };
}

} // namespace detail

/// Raw head outputs for one feature vector.
inline std::vector<double> head_forward( const HeadWeights& head, const std::vector<double>& features )
{
	return detail::forward_all( head, features ).back();
}

/// Class probabilities predicted by a head.
inline std::vector<double> head_probs( const HeadWeights& head, const std::vector<double>& features,
	const TrainConfig& config )
{
	const std::vector<double> raw = head_forward( head, features );
	if( head.kind == HeadKind::Beta ) {
		return class_probs( link( raw[0], raw[1], config.epsilon ), config.thresholds ).probs;
	}
	const double zmax = *std::max_element( raw.begin(), raw.end() );
	std::vector<double> p( raw.size() );
	double total = 0.0;
	for( std::size_t j = 0; j < raw.size(); ++j ) {
		p[j] = std::exp( raw[j] - zmax );
		total += p[j];
	}
	for( double& v : p ) {
		v /= total;
	}
	return p;
}

inline int head_predict( const HeadWeights& head, const std::vector<double>& features, const TrainConfig& config )
{
	return argmax_class( head_probs( head, features, config ) );
}

/// Mean loss over `batch` (lambda-weighted) and its gradient in every parameter.
inline double batch_loss_grad( const HeadWeights& head, const Dataset& data, std::span<const std::size_t> batch,
	const TrainConfig& config, HeadWeights& grad )
{
	grad = detail::zeros_like( head );
	const double scale = config.focal.lambda_weight / static_cast<double>( batch.size() );
	double loss = 0.0;
	for( std::size_t idx : batch ) {
		const SyntheticSample& s = data[idx];
		const auto acts = detail::forward_all( head, s.features );
		const detail::OutputLoss out = detail::output_loss( head, acts.back(), s.observedLabel, config );
		loss += scale * out.loss;
		detail::backward_accumulate( head, acts, out.dRaw, scale, grad );
	}
	return loss;
}

/// Raised when a loss becomes non-finite; carries the 1-based epoch.
class DivergenceError : public std::runtime_error {
public:
	DivergenceError( int epoch, const std::string& what ) :
		std::runtime_error( what + " diverged at epoch " + std::to_string( epoch ) ), epoch_( epoch )
	{
	}
	int epoch() const { return epoch_; }

private:
	int epoch_;
};

struct TrainedHead {
	HeadWeights weights;
	std::vector<double> lossHistory; // mean training loss of every epoch
};

namespace detail {

inline TrainedHead train_head( HeadKind kind, const Dataset& data, const TrainConfig& config )
{
	config.validate();
	if( data.empty() ) {
		throw std::invalid_argument( "training data must be non-empty" );
	}
	for( const SyntheticSample& s : data ) {
		if( s.features.size() != config.feature_dims() ) {
			throw std::invalid_argument( "sample feature count does not match the configuration" );
		}
	}
	TrainedHead result{ init_head( kind, config ), {} };
	HeadWeights& head = result.weights;
	std::mt19937_64 rng = make_rng( config.seed, ( kind == HeadKind::Beta ? stream::kBetaHead : stream::kSoftmaxHead ) + 100 );
	std::vector<std::size_t> order( data.size() );
	std::iota( order.begin(), order.end(), std::size_t{ 0 } );
	HeadWeights grad;
	for( int epoch = 1; epoch <= config.epochs; ++epoch ) {
		std::shuffle( order.begin(), order.end(), rng );
		double epochLoss = 0.0;
		for( std::size_t start = 0; start < order.size(); start += config.batchSize ) {
			const std::size_t len = std::min( config.batchSize, order.size() - start );
			const std::span<const std::size_t> batch( order.data() + start, len );
			double loss = 0.0;
			try {
				loss = batch_loss_grad( head, data, batch, config, grad );
			} catch( const std::runtime_error& ) {
				// Shape parameters pushed far outside any sane range by runaway weights.
				loss = std::numeric_limits<double>::quiet_NaN();
			}
			if( !std::isfinite( loss ) ) {
				throw DivergenceError( epoch, head_name( kind ) + " head" );
			}
			epochLoss += loss * static_cast<double>( len );
			for( std::size_t li = 0; li < head.layers.size(); ++li ) {
				auto& l = head.layers[li];
				const auto& g = grad.layers[li];
				for( std::size_t i = 0; i < l.weights.size(); ++i ) {
					l.weights[i] -= config.learningRate * g.weights[i];
				}
				for( std::size_t i = 0; i < l.bias.size(); ++i ) {
					l.bias[i] -= config.learningRate * g.bias[i];
				}
			}
		}
		if( !head.all_finite() ) {
			throw DivergenceError( epoch, head_name( kind ) + " head" );
		}
		result.lossHistory.push_back( epochLoss / static_cast<double>( order.size() ) );
	}
	return result;
}

} // namespace detail

inline TrainedHead train_beta_head( const Dataset& data, const TrainConfig& config )
{
	return detail::train_head( HeadKind::Beta, data, config );
}

inline TrainedHead train_softmax_head( const Dataset& data, const TrainConfig& config )
{
	return detail::train_head( HeadKind::Softmax, data, config );
}

struct HeadEvaluation {
	double accuracy = 0.0;
	ConfusionMatrix confusion;
};

/// Accuracy against the clean labels, plus the clean-vs-predicted confusion matrix.
inline HeadEvaluation evaluate_head( const HeadWeights& head, const Dataset& data, const TrainConfig& config )
{
	HeadEvaluation ev{ 0.0, ConfusionMatrix( config.thresholds.classes() ) };
	std::size_t correct = 0;
	for( const SyntheticSample& s : data ) {
		const int predicted = head_predict( head, s.features, config );
		correct += predicted == s.cleanLabel ? 1 : 0;
		ev.confusion.add( s.cleanLabel, predicted );
	}
	ev.confusion.normalize();
	ev.accuracy = data.empty() ? 0.0 : static_cast<double>( correct ) / static_cast<double>( data.size() );
	return ev;
}

struct SeedOutcome {
	std::uint64_t seed = 0;
	double clean = 0.0;
	double noisy = 0.0;
	double drop() const { return clean - noisy; }
};

struct HeadSummary {
	HeadKind kind = HeadKind::Beta;
	std::vector<SeedOutcome> perSeed;
	double meanClean = 0.0;
	double meanNoisy = 0.0;
	double meanDrop = 0.0;
	double sdDrop = 0.0;
	double relativeDrop = 0.0; // 100 * meanDrop / meanClean
	ConfusionMatrix cleanConfusion;
	ConfusionMatrix noisyConfusion;
};

struct ExperimentReport {
	double noiseRate = 0.0;
	std::uint64_t baseSeed = 0;
	std::size_t seeds = 0;
	std::vector<std::size_t> flipCounts; // per seed
	bool flipsAdjacent = true;
	HeadSummary beta;
	HeadSummary softmax;
};

namespace detail {

inline void summarize( HeadSummary& h )
{
	const double n = static_cast<double>( h.perSeed.size() );
	if( n == 0 ) {
		return;
	}
	for( const SeedOutcome& s : h.perSeed ) {
		h.meanClean += s.clean / n;
		h.meanNoisy += s.noisy / n;
		h.meanDrop += s.drop() / n;
	}
	double ss = 0.0;
	for( const SeedOutcome& s : h.perSeed ) {
		ss += ( s.drop() - h.meanDrop ) * ( s.drop() - h.meanDrop );
	}
	h.sdDrop = n > 1 ? std::sqrt( ss / ( n - 1 ) ) : 0.0;
	h.relativeDrop = h.meanClean > 0.0 ? 100.0 * h.meanDrop / h.meanClean : 0.0;
	h.cleanConfusion.normalize();
	h.noisyConfusion.normalize();
}

inline void merge_counts( ConfusionMatrix& into, const ConfusionMatrix& from )
{
	for( int r = 0; r < into.classes; ++r ) {
		for( int c = 0; c < into.classes; ++c ) {
			into.counts[r][c] += from.counts[r][c];
		}
	}
}

} // namespace detail

/// Trains both heads on clean and on noise-injected copies of the training
/// split for seeds base, base+1, ..., base+nSeeds-1 and evaluates them on the
/// pristine test split. Runs are spread over `threads` workers; results do not
/// depend on the thread count.
inline ExperimentReport run_noise_experiment( const TrainConfig& config, double noiseRate, std::size_t nSeeds,
	unsigned threads = 1 )
{
	config.validate();
	NoiseSpec{ noiseRate, 0, false }.validate();
	if( nSeeds == 0 ) {
		throw std::invalid_argument( "number of seeds must be positive" );
	}
	const int classes = config.thresholds.classes();

	struct SeedData {
		TrainConfig config;
		Dataset clean;
		Dataset noisy;
		Dataset test;
	};
	std::vector<SeedData> seeds( nSeeds );
	ExperimentReport report;
	report.noiseRate = noiseRate;
	report.baseSeed = config.seed;
	report.seeds = nSeeds;
	for( std::size_t s = 0; s < nSeeds; ++s ) {
		SeedData& sd = seeds[s];
		sd.config = config;
		sd.config.seed = config.seed + s;
		DataSplits splits = make_splits( sd.config );
		sd.clean = splits.train;
		sd.noisy = std::move( splits.train );
		sd.test = std::move( splits.test );
		const auto rng = make_rng( sd.config.seed, stream::kNoise )();
		const NoisyAnnotations flips = noisify_dataset( sd.noisy, classes, noiseRate, rng );
		report.flipCounts.push_back( flips.flips.size() );
		for( const LabelFlip& f : flips.flips ) {
			report.flipsAdjacent = report.flipsAdjacent && std::abs( f.oldLabel - f.newLabel ) == 1;
		}
	}

	// One job per (seed, condition, head).
	const std::size_t jobs = nSeeds * 4;
	std::vector<HeadEvaluation> results( jobs );
	std::vector<std::exception_ptr> errors( jobs );
	auto runJob = [&]( std::size_t j ) {
		try {
			const SeedData& sd = seeds[j / 4];
			const bool noisy = ( j % 4 ) / 2 == 1;
			const HeadKind kind = j % 2 == 0 ? HeadKind::Beta : HeadKind::Softmax;
			const TrainedHead trained = detail::train_head( kind, noisy ? sd.noisy : sd.clean, sd.config );
			results[j] = evaluate_head( trained.weights, sd.test, sd.config );
		} catch( ... ) {
			errors[j] = std::current_exception();
		}
	};
	const unsigned workers = std::max( 1u, std::min<unsigned>( threads, static_cast<unsigned>( jobs ) ) );
	if( workers == 1 ) {
		for( std::size_t j = 0; j < jobs; ++j ) {
			runJob( j );
		}
	} else {
		std::vector<std::thread> pool;
		for( unsigned w = 0; w < workers; ++w ) {
			pool.emplace_back( [&, w] {
				for( std::size_t j = w; j < jobs; j += workers ) {
					runJob( j );
				}
			} );
		}
		for( auto& t : pool ) {
			t.join();
		}
	}
	for( const auto& e : errors ) {
		if( e ) {
			std::rethrow_exception( e );
		}
	}

	report.beta = { HeadKind::Beta, {}, 0, 0, 0, 0, 0, ConfusionMatrix( classes ), ConfusionMatrix( classes ) };
	report.softmax = { HeadKind::Softmax, {}, 0, 0, 0, 0, 0, ConfusionMatrix( classes ), ConfusionMatrix( classes ) };
	for( std::size_t s = 0; s < nSeeds; ++s ) {
		for( int h = 0; h < 2; ++h ) {
			HeadSummary& summary = h == 0 ? report.beta : report.softmax;
			const HeadEvaluation& clean = results[s * 4 + h];
			const HeadEvaluation& noisy = results[s * 4 + 2 + h];
			summary.perSeed.push_back( { seeds[s].config.seed, clean.accuracy, noisy.accuracy } );
			detail::merge_counts( summary.cleanConfusion, clean.confusion );
			detail::merge_counts( summary.noisyConfusion, noisy.confusion );
		}
	}
	detail::summarize( report.beta );
	detail::summarize( report.softmax );
	return report;
}

namespace detail {

inline nlohmann::ordered_json confusion_json( const ConfusionMatrix& m )
{
	nlohmann::ordered_json j = nlohmann::ordered_json::object();
	j["counts"] = m.counts;
	j["percent"] = m.percent;
	return j;
}

inline nlohmann::ordered_json head_json( const HeadSummary& h )
{
	nlohmann::ordered_json j = nlohmann::ordered_json::object();
	j["head"] = head_name( h.kind );
	j["mean_clean_accuracy"] = h.meanClean;
	j["mean_noisy_accuracy"] = h.meanNoisy;
	j["mean_abs_drop"] = h.meanDrop;
	j["sd_abs_drop"] = h.sdDrop;
	j["mean_pct_drop"] = h.relativeDrop;
	nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
	for( const SeedOutcome& s : h.perSeed ) {
		nlohmann::ordered_json o = nlohmann::ordered_json::object();
		o["seed"] = s.seed;
		o["clean_accuracy"] = s.clean;
		o["noisy_accuracy"] = s.noisy;
		o["abs_drop"] = s.drop();
		seeds.push_back( std::move( o ) );
	}
	j["per_seed"] = std::move( seeds );
	j["clean_confusion"] = confusion_json( h.cleanConfusion );
	j["noisy_confusion"] = confusion_json( h.noisyConfusion );
	return j;
}

} // namespace detail

inline std::string report_json( const ExperimentReport& r )
{
	nlohmann::ordered_json j = nlohmann::ordered_json::object();
	j["noise_rate"] = r.noiseRate;
	j["base_seed"] = r.baseSeed;
	j["seeds"] = r.seeds;
	j["flip_counts"] = r.flipCounts;
	j["flips_adjacent"] = r.flipsAdjacent;
	j["heads"] = nlohmann::ordered_json::array( { detail::head_json( r.beta ), detail::head_json( r.softmax ) } );
	return j.dump( 2 ) + "\n";
}

/// Accuracy table with Clean / Noise / Abs. Drop / % Drop columns (percent units).
inline std::string report_text( const ExperimentReport& r )
{
	std::ostringstream os;
	os << std::fixed << std::setprecision( 2 );
	os << "Label noise " << 100.0 * r.noiseRate << "% (adjacent-class), " << r.seeds << " seeds\n";
	os << std::left << std::setw( 28 ) << "Head" << std::right << std::setw( 10 ) << "Clean" << std::setw( 10 )
	   << "Noise" << std::setw( 12 ) << "Abs. Drop" << std::setw( 10 ) << "% Drop" << std::setw( 12 ) << "sd(Drop)"
	   << '\n';
	for( const HeadSummary* h : { &r.beta, &r.softmax } ) {
		const std::string name = h->kind == HeadKind::Beta ? "Beta (probabilistic)" : "Softmax (baseline)";
		os << std::left << std::setw( 28 ) << name << std::right << std::setw( 10 ) << 100.0 * h->meanClean
		   << std::setw( 10 ) << 100.0 * h->meanNoisy << std::setw( 12 ) << 0.0 - 100.0 * h->meanDrop << std::setw( 10 )
		   << 0.0 - h->relativeDrop << std::setw( 12 ) << 100.0 * h->sdDrop << '\n';
	}
	return os.str();
}

/// One row per sample: index, latent, clean and observed labels, features.
inline std::string dataset_csv( const Dataset& data )
{
	std::ostringstream os;
	os << std::setprecision( 17 );
	os << "index,latent,clean_label,observed_label";
	const std::size_t dims = data.empty() ? 0 : data.front().features.size();
	for( std::size_t d = 0; d < dims; ++d ) {
		os << ",f" << d;
	}
	os << '\n';
	for( std::size_t i = 0; i < data.size(); ++i ) {
		const SyntheticSample& s = data[i];
		os << i << ',' << s.latent << ',' << s.cleanLabel << ',' << s.observedLabel;
		for( double f : s.features ) {
			os << ',' << f;
		}
		os << '\n';
	}
	return os.str();
}

} // namespace ivbeta
