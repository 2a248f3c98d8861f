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

// COCO-convention bounding-box evaluation: greedy score-ordered matching,
// 101-point interpolated AP, mAP at IoU 0.50 and averaged over 0.50:0.95, and
// average recall with at most 100 detections per image and class.
//
// No crowd regions and no area ranges.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <ivbeta/annotations.hpp>

namespace ivbeta {

struct DetectionRecord {
	ImageId image = 0;
	BoundingBox box;
	int label = 1;
	double score = 0.0;
};

/// Flattens an annotation set carrying scores into detection records.
inline std::vector<DetectionRecord> detections_from( const AnnotationSet& set )
{
	std::vector<DetectionRecord> out;
	for( const auto& [image, instances] : set.images ) {
		for( const Instance& inst : instances ) {
			out.push_back( { image, inst.box, inst.label, inst.score.value_or( 1.0 ) } );
		}
	}
	return out;
}

/// 0.50, 0.55, ..., 0.95 generated the way COCO tooling does (start + i * step, last pinned).
inline std::vector<double> coco_iou_thresholds()
{
	std::vector<double> t( 10 );
	const double step = ( 0.95 - 0.5 ) / 9.0;
	for( int i = 0; i < 10; ++i ) {
		t[i] = i * step + 0.5;
	}
	t.back() = 0.95;
	return t;
}

/// 0.00, 0.01, ..., 1.00.
inline std::vector<double> coco_recall_thresholds()
{
	std::vector<double> r( 101 );
	for( int i = 0; i < 101; ++i ) {
		r[i] = i * 0.01;
	}
	r.back() = 1.0;
	return r;
}

inline constexpr std::size_t kDefaultMaxDetections = 100;

/// Precision/recall summary of one class at one IoU threshold.
struct ClassThresholdResult {
	std::size_t groundTruths = 0;
	double ap = 0.0;
	double recall = 0.0;
};

namespace detail {

inline ClassThresholdResult evaluate_class_threshold( const std::vector<DetectionRecord>& dets,
	const AnnotationSet& gts, int label, double iouThreshold, std::size_t maxDets )
{
	struct Hit {
		double score;
		bool tp;
	};
	std::map<ImageId, std::vector<const DetectionRecord*>> detsByImage;
	for( const DetectionRecord& d : dets ) {
		if( d.label == label ) {
			detsByImage[d.image].push_back( &d );
		}
	}
	std::vector<ImageId> images;
	for( const auto& [id, list] : gts.images ) {
		images.push_back( id );
	}
	for( const auto& [id, list] : detsByImage ) {
		images.push_back( id );
	}
	std::sort( images.begin(), images.end() );
	images.erase( std::unique( images.begin(), images.end() ), images.end() );

	ClassThresholdResult result;
	std::vector<Hit> hits;
	const double minIou = std::min( iouThreshold, 1.0 - 1e-10 );
	for( ImageId image : images ) {
		std::vector<const BoundingBox*> imageGts;
		if( const auto* list = gts.find( image ) ) {
			for( const Instance& inst : *list ) {
				if( inst.label == label ) {
					imageGts.push_back( &inst.box );
				}
			}
		}
		result.groundTruths += imageGts.size();
		auto it = detsByImage.find( image );
		if( it == detsByImage.end() ) {
			continue;
		}
		std::vector<const DetectionRecord*> imageDets = it->second;
		std::stable_sort( imageDets.begin(), imageDets.end(),
			[]( const DetectionRecord* l, const DetectionRecord* r ) { return l->score > r->score; } );
		if( imageDets.size() > maxDets ) {
			imageDets.resize( maxDets );
		}
		std::vector<char> taken( imageGts.size(), 0 );
		for( const DetectionRecord* d : imageDets ) {
			double best = minIou;
			std::ptrdiff_t match = -1;
			for( std::size_t g = 0; g < imageGts.size(); ++g ) {
				if( taken[g] ) {
					continue;
				}
				const double overlap = iou( d->box, *imageGts[g] );
				if( overlap < best ) {
					continue;
				}
				best = overlap;
				match = static_cast<std::ptrdiff_t>( g );
			}
			if( match >= 0 ) {
				taken[static_cast<std::size_t>( match )] = 1;
			}
			hits.push_back( { d->score, match >= 0 } );
		}
	}
	if( result.groundTruths == 0 ) {
		return result;
	}
	std::stable_sort( hits.begin(), hits.end(), []( const Hit& l, const Hit& r ) { return l.score > r.score; } );

	const double npos = static_cast<double>( result.groundTruths );
	const double tiny = std::numeric_limits<double>::epsilon();
	std::vector<double> recall( hits.size() );
	std::vector<double> precision( hits.size() );
	double tp = 0.0;
	double fp = 0.0;
	for( std::size_t i = 0; i < hits.size(); ++i ) {
		( hits[i].tp ? tp : fp ) += 1.0;
		recall[i] = tp / npos;
		precision[i] = tp / ( tp + fp + tiny );
	}
	result.recall = hits.empty() ? 0.0 : recall.back();
	// Precision envelope: non-increasing from the right.
	for( std::size_t i = hits.size(); i-- > 1; ) {
		precision[i - 1] = std::max( precision[i - 1], precision[i] );
	}
	const auto recThrs = coco_recall_thresholds();
	double sum = 0.0;
	for( double r : recThrs ) {
		const auto pos = std::lower_bound( recall.begin(), recall.end(), r );
		if( pos != recall.end() ) {
			sum += precision[static_cast<std::size_t>( pos - recall.begin() )];
		}
	}
	result.ap = sum / static_cast<double>( recThrs.size() );
	return result;
}

} // namespace detail

/// AP of one class at one IoU threshold (0 when there are ground truths but no
/// detections, and also 0 when the class has no ground truths).
inline double average_precision( const std::vector<DetectionRecord>& dets, const AnnotationSet& gts, int label,
	double iouThreshold, std::size_t maxDets = kDefaultMaxDetections )
{
	return detail::evaluate_class_threshold( dets, gts, label, iouThreshold, maxDets ).ap;
}

struct EvalResult {
	std::vector<double> iouThresholds;
	std::vector<int> classes;                 // classes that have ground truth
	std::vector<std::vector<double>> ap;      // [class][threshold]
	std::vector<std::vector<double>> recall;  // [class][threshold]
	double map50 = 0.0;
	double map75 = 0.0;
	double map50_95 = 0.0;
	double ar100 = 0.0;
};

/// Full COCO-style summary over every class with at least one ground truth.
inline EvalResult evaluate( const std::vector<DetectionRecord>& dets, const AnnotationSet& gts,
	std::size_t maxDets = kDefaultMaxDetections )
{
	EvalResult res;
	res.iouThresholds = coco_iou_thresholds();
	for( int k = 1; k <= gts.num_classes; ++k ) {
		std::vector<double> aps;
		std::vector<double> recs;
		bool hasGt = false;
		for( double t : res.iouThresholds ) {
			const auto r = detail::evaluate_class_threshold( dets, gts, k, t, maxDets );
			hasGt = r.groundTruths > 0;
			aps.push_back( r.ap );
			recs.push_back( r.recall );
		}
		if( hasGt ) {
			res.classes.push_back( k );
			res.ap.push_back( std::move( aps ) );
			res.recall.push_back( std::move( recs ) );
		}
	}
	if( res.classes.empty() ) {
		return res;
	}
	const double nc = static_cast<double>( res.classes.size() );
	const double nt = static_cast<double>( res.iouThresholds.size() );
	for( std::size_t c = 0; c < res.classes.size(); ++c ) {
		res.map50 += res.ap[c][0] / nc;
		res.map75 += res.ap[c][5] / nc;
		res.map50_95 += std::accumulate( res.ap[c].begin(), res.ap[c].end(), 0.0 ) / ( nc * nt );
		res.ar100 += std::accumulate( res.recall[c].begin(), res.recall[c].end(), 0.0 ) / ( nc * nt );
	}
	return res;
}

/// Text table with the mAP50 / mAP50-95 columns plus AP75 and AR@100.
inline std::string format_eval_text( const EvalResult& r, const std::string& model,
	const std::vector<std::string>& classNames = {} )
{
	std::ostringstream os;
	os << std::fixed << std::setprecision( 3 );
	os << std::left << std::setw( 24 ) << "Model" << std::right << std::setw( 10 ) << "mAP50" << std::setw( 12 )
	   << "mAP50-95" << std::setw( 10 ) << "AP75" << std::setw( 10 ) << "AR@100" << '\n';
	os << std::left << std::setw( 24 ) << model << std::right << std::setw( 10 ) << r.map50 << std::setw( 12 )
	   << r.map50_95 << std::setw( 10 ) << r.map75 << std::setw( 10 ) << r.ar100 << '\n';
	if( !r.classes.empty() ) {
		os << '\n' << std::left << std::setw( 24 ) << "Class" << std::right << std::setw( 10 ) << "AP50"
		   << std::setw( 12 ) << "AP50-95" << '\n';
		for( std::size_t c = 0; c < r.classes.size(); ++c ) {
			const int k = r.classes[c];
			const std::string name = ( k - 1 < static_cast<int>( classNames.size() ) ) ? classNames[k - 1]
																					: "class" + std::to_string( k );
			const double mean = std::accumulate( r.ap[c].begin(), r.ap[c].end(), 0.0 ) / r.ap[c].size();
			os << std::left << std::setw( 24 ) << name << std::right << std::setw( 10 ) << r.ap[c][0]
			   << std::setw( 12 ) << mean << '\n';
		}
	}
	return os.str();
}

} // namespace ivbeta
