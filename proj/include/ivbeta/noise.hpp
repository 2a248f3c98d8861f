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

// Symmetric adjacent-class label corruption. Exactly round(rate * N) instances,
// drawn without replacement, move to a neighbouring class; boxes are untouched.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <ivbeta/annotations.hpp>

namespace ivbeta {

struct NoiseSpec {
	double rate = 0.10;
	std::uint64_t seed = 0;
	bool perClass = false; // draw round(rate * N_k) within every class instead of globally

	void validate() const
	{
		if( !std::isfinite( rate ) || rate < 0.0 || rate > 1.0 ) {
			throw std::invalid_argument( "noise rate must lie in [0, 1] (got " + std::to_string( rate ) + ")" );
		}
	}
};

struct LabelFlip {
	ImageId image = 0;
	std::size_t index = 0; // position within the image's instance list
	AnnotationId annotation = 0;
	int oldLabel = 0;
	int newLabel = 0;
};

struct NoisyAnnotations {
	AnnotationSet annotations;
	std::vector<LabelFlip> flips; // ascending (image, index)
};

namespace detail {

// k distinct positions out of n, partial Fisher-Yates.
inline std::vector<std::size_t> sample_without_replacement( std::size_t n, std::size_t k, std::mt19937_64& rng )
{
	std::vector<std::size_t> pool( n );
	for( std::size_t i = 0; i < n; ++i ) {
		pool[i] = i;
	}
	for( std::size_t i = 0; i < k; ++i ) {
		std::uniform_int_distribution<std::size_t> pick( i, n - 1 );
		std::swap( pool[i], pool[pick( rng )] );
	}
	pool.resize( k );
	return pool;
}

inline std::size_t rounded_count( double rate, std::size_t n )
{
	return static_cast<std::size_t>( std::llround( rate * static_cast<double>( n ) ) );
}

} // namespace detail

/// Neighbouring class of `label` (1-based): 1 -> 2, K -> K-1, interior classes
/// go either way with probability 1/2.
inline int adjacent_label( int label, int classes, std::mt19937_64& rng )
{
	if( label <= 1 ) {
		return 2;
	}
	if( label >= classes ) {
		return classes - 1;
	}
	std::bernoulli_distribution up( 0.5 );
	return up( rng ) ? label + 1 : label - 1;
}

inline NoisyAnnotations inject_noise( const AnnotationSet& annotations, const NoiseSpec& spec )
{
	spec.validate();
	annotations.validate();

	struct Slot {
		ImageId image;
		std::size_t index;
	};
	std::vector<Slot> slots;
	for( const auto& [image, instances] : annotations.images ) {
		for( std::size_t i = 0; i < instances.size(); ++i ) {
			slots.push_back( { image, i } );
		}
	}

	std::mt19937_64 rng( spec.seed );
	std::vector<std::size_t> chosen;
	if( spec.perClass ) {
		for( int k = 1; k <= annotations.num_classes; ++k ) {
			std::vector<std::size_t> members;
			for( std::size_t s = 0; s < slots.size(); ++s ) {
				if( annotations.images.at( slots[s].image )[slots[s].index].label == k ) {
					members.push_back( s );
				}
			}
			for( std::size_t pick : detail::sample_without_replacement(
					 members.size(), detail::rounded_count( spec.rate, members.size() ), rng ) ) {
				chosen.push_back( members[pick] );
			}
		}
	} else {
		chosen = detail::sample_without_replacement( slots.size(), detail::rounded_count( spec.rate, slots.size() ), rng );
	}
	std::sort( chosen.begin(), chosen.end() );

	NoisyAnnotations out{ annotations, {} };
	for( std::size_t s : chosen ) {
		Instance& inst = out.annotations.images.at( slots[s].image )[slots[s].index];
		const int old = inst.label;
		inst.label = adjacent_label( old, annotations.num_classes, rng );
		out.flips.push_back( { slots[s].image, slots[s].index, inst.id, old, inst.label } );
	}
	return out;
}

/// Flip log as CSV: image_id,index,annotation_id,old_label,new_label (1-based labels).
inline std::string format_flip_log_csv( const std::vector<LabelFlip>& flips )
{
	std::ostringstream os;
	os << "image_id,index,annotation_id,old_label,new_label\n";
	for( const LabelFlip& f : flips ) {
		os << f.image << ',' << f.index << ',' << f.annotation << ',' << f.oldLabel << ',' << f.newLabel << '\n';
	}
	return os.str();
}

} // namespace ivbeta
