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
#include <set>

#include <gtest/gtest.h>

#include <ivbeta/noise.hpp>

using namespace ivbeta;

namespace {

// n instances spread over images of 7, with labels cycling 1..classes.
AnnotationSet make_set( std::size_t n, int classes = 3 )
{
	AnnotationSet set;
	set.source_name = "synthetic";
	set.num_classes = classes;
	for( std::size_t i = 0; i < n; ++i ) {
		const ImageId image = static_cast<ImageId>( 1 + i / 7 );
		set.images[image].push_back(
			{ static_cast<AnnotationId>( i + 1 ), { double( i % 7 ) * 20.0, 0, 10, 10 }, int( i % classes ) + 1, {} } );
	}
	return set;
}

} // namespace

TEST( Noise, ExactFlipCountAndAdjacency )
{
	const AnnotationSet clean = make_set( 10000 );
	const NoisyAnnotations noisy = inject_noise( clean, { 0.10, 42, false } );
	ASSERT_EQ( noisy.flips.size(), 1000u );
	std::size_t changed = 0;
	for( const auto& [image, list] : clean.images ) {
		const auto& out = noisy.annotations.images.at( image );
		ASSERT_EQ( out.size(), list.size() );
		for( std::size_t i = 0; i < list.size(); ++i ) {
			EXPECT_EQ( out[i].id, list[i].id );
			EXPECT_EQ( out[i].box, list[i].box );
			if( out[i].label != list[i].label ) {
				++changed;
				EXPECT_EQ( std::abs( out[i].label - list[i].label ), 1 );
			}
		}
	}
	EXPECT_EQ( changed, 1000u );
	for( const LabelFlip& f : noisy.flips ) {
		EXPECT_EQ( std::abs( f.newLabel - f.oldLabel ), 1 );
		EXPECT_EQ( noisy.annotations.images.at( f.image )[f.index].label, f.newLabel );
	}
}

TEST( Noise, EdgeClassesFlipInward )
{
	const NoisyAnnotations noisy = inject_noise( make_set( 3000 ), { 0.5, 3, false } );
	bool sawUp = false;
	bool sawDown = false;
	for( const LabelFlip& f : noisy.flips ) {
		if( f.oldLabel == 1 ) {
			EXPECT_EQ( f.newLabel, 2 );
		}
		if( f.oldLabel == 3 ) {
			EXPECT_EQ( f.newLabel, 2 );
		}
		if( f.oldLabel == 2 ) {
			sawUp = sawUp || f.newLabel == 3;
			sawDown = sawDown || f.newLabel == 1;
		}
	}
	EXPECT_TRUE( sawUp );
	EXPECT_TRUE( sawDown );
}

TEST( Noise, FlipsAreDistinctAndSorted )
{
	const NoisyAnnotations noisy = inject_noise( make_set( 997 ), { 0.33, 8, false } );
	EXPECT_EQ( noisy.flips.size(), static_cast<std::size_t>( std::llround( 0.33 * 997 ) ) );
	std::set<AnnotationId> ids;
	for( std::size_t i = 0; i < noisy.flips.size(); ++i ) {
		ids.insert( noisy.flips[i].annotation );
		if( i > 0 ) {
			const auto& p = noisy.flips[i - 1];
			const auto& c = noisy.flips[i];
			EXPECT_TRUE( p.image < c.image || ( p.image == c.image && p.index < c.index ) );
		}
	}
	EXPECT_EQ( ids.size(), noisy.flips.size() );
}

TEST( Noise, ZeroAndFullRate )
{
	const AnnotationSet clean = make_set( 50 );
	const NoisyAnnotations none = inject_noise( clean, { 0.0, 1, false } );
	EXPECT_TRUE( none.flips.empty() );
	EXPECT_EQ( none.annotations, clean );
	const NoisyAnnotations all = inject_noise( clean, { 1.0, 1, false } );
	EXPECT_EQ( all.flips.size(), 50u );
}

TEST( Noise, PerClassCounts )
{
	const AnnotationSet clean = make_set( 300 );
	const NoisyAnnotations noisy = inject_noise( clean, { 0.1, 5, true } );
	int perClass[4] = { 0, 0, 0, 0 };
	for( const LabelFlip& f : noisy.flips ) {
		++perClass[f.oldLabel];
	}
	EXPECT_EQ( perClass[1], 10 );
	EXPECT_EQ( perClass[2], 10 );
	EXPECT_EQ( perClass[3], 10 );
}

TEST( Noise, DeterministicForSeed )
{
	const AnnotationSet clean = make_set( 500 );
	const auto a = inject_noise( clean, { 0.2, 77, false } );
	const auto b = inject_noise( clean, { 0.2, 77, false } );
	const auto c = inject_noise( clean, { 0.2, 78, false } );
	EXPECT_EQ( a.annotations, b.annotations );
	EXPECT_EQ( format_flip_log_csv( a.flips ), format_flip_log_csv( b.flips ) );
	EXPECT_NE( a.annotations, c.annotations );
}

TEST( Noise, RejectsBadRate )
{
	const AnnotationSet clean = make_set( 10 );
	EXPECT_THROW( inject_noise( clean, { -0.1, 1, false } ), std::invalid_argument );
	EXPECT_THROW( inject_noise( clean, { 1.5, 1, false } ), std::invalid_argument );
	EXPECT_THROW( inject_noise( clean, { std::nan( "" ), 1, false } ), std::invalid_argument );
}

TEST( Noise, TwoClassesAlwaysSwap )
{
	const NoisyAnnotations noisy = inject_noise( make_set( 100, 2 ), { 0.3, 2, false } );
	for( const LabelFlip& f : noisy.flips ) {
		EXPECT_EQ( f.newLabel, 3 - f.oldLabel );
	}
}

TEST( Noise, FlipLogCsv )
{
	const std::string csv = format_flip_log_csv( { { 4, 1, 17, 2, 3 } } );
	EXPECT_EQ( csv, "image_id,index,annotation_id,old_label,new_label\n4,1,17,2,3\n" );
}
