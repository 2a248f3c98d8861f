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

// Annotation agreement: per-image optimal box matching by IoU, followed by
// row-normalized confusion matrices between the label sources.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <ivbeta/annotations.hpp>
#include <ivbeta/hungarian.hpp>
#include <ivbeta/maturity.hpp>

namespace ivbeta {

inline constexpr double kDefaultMatchIou = 0.5;

struct MatchedPair {
	std::size_t indexA = 0;
	std::size_t indexB = 0;
	double iou = 0.0;
};

struct ImageMatch {
	ImageId image = 0;
	std::vector<MatchedPair> pairs;
	std::vector<std::size_t> unmatchedA;
	std::vector<std::size_t> unmatchedB;
};

struct MatchResult {
	double iouThreshold = kDefaultMatchIou;
	std::vector<ImageMatch> images;

	std::size_t pair_count() const
	{
		std::size_t n = 0;
		for( const auto& im : images ) {
			n += im.pairs.size();
		}
		return n;
	}
	std::size_t unmatched_a_count() const
	{
		std::size_t n = 0;
		for( const auto& im : images ) {
			n += im.unmatchedA.size();
		}
		return n;
	}
	std::size_t unmatched_b_count() const
	{
		std::size_t n = 0;
		for( const auto& im : images ) {
			n += im.unmatchedB.size();
		}
		return n;
	}
};

/// Optimal one-to-one matching of two box lists on cost 1 - IoU. Pairs below
/// the threshold are dropped after assignment and reported unmatched.
inline ImageMatch match_boxes( const std::vector<Instance>& a, const std::vector<Instance>& b, double iouThreshold )
{
	ImageMatch out;
	std::vector<char> usedA( a.size(), 0 );
	std::vector<char> usedB( b.size(), 0 );
	if( !a.empty() && !b.empty() ) {
		CostMatrix cost( a.size(), b.size() );
		for( std::size_t i = 0; i < a.size(); ++i ) {
			for( std::size_t j = 0; j < b.size(); ++j ) {
				cost( i, j ) = 1.0 - iou( a[i].box, b[j].box );
			}
		}
		for( const auto& [i, j] : hungarian( cost ).pairs ) {
			const double overlap = iou( a[i].box, b[j].box );
			if( overlap >= iouThreshold ) {
				out.pairs.push_back( { i, j, overlap } );
				usedA[i] = 1;
				usedB[j] = 1;
			}
		}
	}
	for( std::size_t i = 0; i < a.size(); ++i ) {
		if( !usedA[i] ) {
			out.unmatchedA.push_back( i );
		}
	}
	for( std::size_t j = 0; j < b.size(); ++j ) {
		if( !usedB[j] ) {
			out.unmatchedB.push_back( j );
		}
	}
	return out;
}

/// Matches every image present in either set. Images known to only one side
/// contribute only unmatched entries.
inline MatchResult match_sets( const AnnotationSet& a, const AnnotationSet& b, double iouThreshold = kDefaultMatchIou )
{
	MatchResult result;
	result.iouThreshold = iouThreshold;
	static const std::vector<Instance> none;
	std::vector<ImageId> ids;
	for( const auto& [id, _] : a.images ) {
		ids.push_back( id );
	}
	for( const auto& [id, _] : b.images ) {
		ids.push_back( id );
	}
	std::sort( ids.begin(), ids.end() );
	ids.erase( std::unique( ids.begin(), ids.end() ), ids.end() );
	for( ImageId id : ids ) {
		const auto* la = a.find( id );
		const auto* lb = b.find( id );
		ImageMatch m = match_boxes( la ? *la : none, lb ? *lb : none, iouThreshold );
		m.image = id;
		result.images.push_back( std::move( m ) );
	}
	return result;
}

/// Reference-by-target counts with each row expressed in percent.
struct ConfusionMatrix {
	int classes = 0;
	std::vector<std::vector<std::int64_t>> counts;
	std::vector<std::vector<double>> percent;
	std::vector<bool> emptyRow; // rows without any sample; their percentages are zero

	explicit ConfusionMatrix( int k = 3 ) :
		classes( k ), counts( k, std::vector<std::int64_t>( k, 0 ) ), percent( k, std::vector<double>( k, 0.0 ) ),
		emptyRow( k, true )
	{
	}

	void add( int reference, int target )
	{
		detail::require_label( reference, static_cast<std::size_t>( classes ) );
		detail::require_label( target, static_cast<std::size_t>( classes ) );
		++counts[reference - 1][target - 1];
	}

	void normalize()
	{
		for( int r = 0; r < classes; ++r ) {
			std::int64_t total = 0;
			for( auto c : counts[r] ) {
				total += c;
			}
			emptyRow[r] = total == 0;
			for( int c = 0; c < classes; ++c ) {
				percent[r][c] = total == 0 ? 0.0 : 100.0 * static_cast<double>( counts[r][c] ) / total;
			}
		}
	}

	std::int64_t total() const
	{
		std::int64_t n = 0;
		for( const auto& row : counts ) {
			for( auto c : row ) {
				n += c;
			}
		}
		return n;
	}

	double diagonal( int k ) const { return percent.at( k - 1 ).at( k - 1 ); }
};

/// Confusion matrix from parallel label arrays (reference, target).
inline ConfusionMatrix confusion_from_labels( const std::vector<int>& reference, const std::vector<int>& target,
	int classes )
{
	if( reference.size() != target.size() ) {
		throw std::invalid_argument( "confusion: label arrays differ in length" );
	}
	ConfusionMatrix m( classes );
	for( std::size_t i = 0; i < reference.size(); ++i ) {
		m.add( reference[i], target[i] );
	}
	m.normalize();
	return m;
}

/// Confusion over matched pairs; rows are labels of `reference` (side A of the
/// match), columns labels of `target` (side B).
inline ConfusionMatrix confusion( const MatchResult& matches, const AnnotationSet& reference,
	const AnnotationSet& target )
{
	const int classes = std::max( reference.num_classes, target.num_classes );
	ConfusionMatrix m( classes );
	for( const ImageMatch& im : matches.images ) {
		const auto* la = reference.find( im.image );
		const auto* lb = target.find( im.image );
		for( const MatchedPair& p : im.pairs ) {
			if( !la || !lb || p.indexA >= la->size() || p.indexB >= lb->size() ) {
				throw std::invalid_argument( "confusion: match result does not fit the annotation sets (image "
					+ std::to_string( im.image ) + ")" );
			}
			m.add( ( *la )[p.indexA].label, ( *lb )[p.indexB].label );
		}
	}
	m.normalize();
	return m;
}

inline std::vector<std::string> default_class_names( int classes )
{
	if( classes == 3 ) {
		return { "Unripe", "Intermediate", "Ripe" };
	}
	std::vector<std::string> names;
	for( int k = 1; k <= classes; ++k ) {
		names.push_back( "class" + std::to_string( k ) );
	}
	return names;
}

/// Aligned text block: reference rows, target columns, values in percent.
inline std::string format_confusion_text( const ConfusionMatrix& m, const std::string& referenceName,
	const std::string& targetName, std::vector<std::string> names = {} )
{
	if( names.empty() ) {
		names = default_class_names( m.classes );
	}
	std::size_t nameWidth = 5;
	for( const auto& n : names ) {
		nameWidth = std::max( nameWidth, n.size() );
	}
	std::size_t colWidth = 8;
	for( const auto& n : names ) {
		colWidth = std::max( colWidth, n.size() + 2 );
	}
	std::ostringstream os;
	os << "Reference: " << referenceName << "   Target: " << targetName << "   (row-normalized, %)\n";
	os << std::left << std::setw( static_cast<int>( nameWidth ) ) << "Class";
	for( const auto& n : names ) {
		os << std::right << std::setw( static_cast<int>( colWidth ) ) << n;
	}
	os << std::right << std::setw( 8 ) << "n" << '\n';
	for( int r = 0; r < m.classes; ++r ) {
		os << std::left << std::setw( static_cast<int>( nameWidth ) ) << names[r];
		std::int64_t rowTotal = 0;
		for( int c = 0; c < m.classes; ++c ) {
			std::ostringstream cell;
			cell << std::fixed << std::setprecision( 1 ) << m.percent[r][c];
			os << std::right << std::setw( static_cast<int>( colWidth ) ) << cell.str();
			rowTotal += m.counts[r][c];
		}
		os << std::right << std::setw( 8 ) << rowTotal;
		if( m.emptyRow[r] ) {
			os << "  (no samples)";
		}
		os << '\n';
	}
	return os.str();
}

/// CSV rows: reference,target_class_name..., one line per reference class.
inline std::string format_confusion_csv( const ConfusionMatrix& m, const std::string& comparison,
	std::vector<std::string> names = {} )
{
	if( names.empty() ) {
		names = default_class_names( m.classes );
	}
	std::ostringstream os;
	os << "comparison,reference_class";
	for( const auto& n : names ) {
		os << ',' << n << "_pct";
	}
	for( const auto& n : names ) {
		os << ',' << n << "_count";
	}
	os << ",empty_row\n";
	for( int r = 0; r < m.classes; ++r ) {
		os << comparison << ',' << names[r];
		for( int c = 0; c < m.classes; ++c ) {
			std::ostringstream cell;
			cell << std::fixed << std::setprecision( 6 ) << m.percent[r][c];
			os << ',' << cell.str();
		}
		for( int c = 0; c < m.classes; ++c ) {
			os << ',' << m.counts[r][c];
		}
		os << ',' << ( m.emptyRow[r] ? 1 : 0 ) << '\n';
	}
	return os.str();
}

/// Baseline labels plus two simulated annotators over the same fruits.
struct SimulatedAnnotations {
	AnnotationSet baseline;
	AnnotationSet annotator1;
	AnnotationSet annotator2;
	std::vector<double> latent; // in annotation-id order
};

inline constexpr int kSimFruitsPerImage = 20;
inline constexpr double kSimImageWidth = 640.0;
inline constexpr double kSimImageHeight = 512.0;

/// Draws latent maturities uniformly on [0, 1]. The baseline labels them with
/// `base`; each annotator judges every fruit against the base cuts shifted by
/// an independent gaussian(0, jitter) draw per cut, clipped to just under half
/// the narrowest interval so a judgment can move at most one class. All three
/// sets share identical boxes on a non-overlapping grid.
inline SimulatedAnnotations simulate_annotators( std::size_t nFruits, const ThresholdSchedule& base,
	double jitterSigma, std::uint64_t seed )
{
	if( !( jitterSigma >= 0.0 ) ) {
		throw std::invalid_argument( "simulate_annotators: jitter sigma must be non-negative" );
	}
	std::mt19937_64 rng( seed );
	std::uniform_real_distribution<double> unit( 0.0, 1.0 );
	std::normal_distribution<double> gauss( 0.0, 1.0 );

	const auto cuts = base.cuts();
	double narrowest = 1.0;
	for( std::size_t i = 1; i < cuts.size(); ++i ) {
		narrowest = std::min( narrowest, cuts[i] - cuts[i - 1] );
	}
	const double maxShift = 0.499 * narrowest;

	SimulatedAnnotations out;
	out.baseline.source_name = "baseline";
	out.annotator1.source_name = "annotator1";
	out.annotator2.source_name = "annotator2";
	for( AnnotationSet* s : { &out.baseline, &out.annotator1, &out.annotator2 } ) {
		s->num_classes = base.classes();
	}

	auto judge = [&]( double m ) {
		int label = 1;
		for( std::size_t k = 1; k + 1 < cuts.size(); ++k ) {
			const double shift = std::clamp( jitterSigma * gauss( rng ), -maxShift, maxShift );
			if( m >= cuts[k] + shift ) {
				label = static_cast<int>( k ) + 1;
			}
		}
		return label;
	};

	constexpr int gridCols = 5;
	const double cellW = kSimImageWidth / gridCols;
	const double cellH = kSimImageHeight / ( kSimFruitsPerImage / gridCols );
	for( std::size_t i = 0; i < nFruits; ++i ) {
		const ImageId image = static_cast<ImageId>( i / kSimFruitsPerImage ) + 1;
		const int slot = static_cast<int>( i % kSimFruitsPerImage );
		const double size = 48.0 + 48.0 * unit( rng );
		const double ox = ( cellW - size ) * unit( rng );
		const double oy = ( cellH - size ) * unit( rng );
		const BoundingBox box{ ( slot % gridCols ) * cellW + ox, ( slot / gridCols ) * cellH + oy, size, size };
		const double m = unit( rng );
		out.latent.push_back( m );
		const AnnotationId id = static_cast<AnnotationId>( i ) + 1;
		out.baseline.images[image].push_back( { id, box, base.quantize( m ), std::nullopt } );
		out.annotator1.images[image].push_back( { id, box, judge( m ), std::nullopt } );
		out.annotator2.images[image].push_back( { id, box, judge( m ), std::nullopt } );
	}
	return out;
}

} // namespace ivbeta
