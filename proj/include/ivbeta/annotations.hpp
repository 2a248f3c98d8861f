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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ivbeta {

using ImageId = std::int64_t;
using AnnotationId = std::int64_t;

/// Axis-aligned box, top-left corner plus size, in image pixels.
struct BoundingBox {
	double x = 0.0;
	double y = 0.0;
	double w = 1.0;
	double h = 1.0;

	double area() const { return w * h; }
	bool valid() const
	{
		return std::isfinite( x ) && std::isfinite( y ) && std::isfinite( w ) && std::isfinite( h ) && w > 0.0
			&& h > 0.0;
	}

	friend bool operator==( const BoundingBox&, const BoundingBox& ) = default;
};

/// Intersection over union of two boxes, in [0, 1].
inline double iou( const BoundingBox& a, const BoundingBox& b )
{
	const double ix = std::min( a.x + a.w, b.x + b.w ) - std::max( a.x, b.x );
	const double iy = std::min( a.y + a.h, b.y + b.h ) - std::max( a.y, b.y );
	if( ix <= 0.0 || iy <= 0.0 ) {
		return 0.0;
	}
	const double inter = ix * iy;
	const double uni = a.area() + b.area() - inter;
	return uni > 0.0 ? std::min( 1.0, inter / uni ) : 0.0;
}

/// One labeled box. `label` is the 1-based class index.
struct Instance {
	AnnotationId id = 0;
	BoundingBox box;
	int label = 1;
	std::optional<double> score;

	friend bool operator==( const Instance&, const Instance& ) = default;
};

/// Boxes and class labels from one source (an annotator, the dataset, a model),
/// grouped by image. Images are kept in ascending id order.
struct AnnotationSet {
	std::string source_name;
	int num_classes = 3;
	std::map<ImageId, std::vector<Instance>> images;

	std::size_t instance_count() const
	{
		std::size_t n = 0;
		for( const auto& [id, instances] : images ) {
			n += instances.size();
		}
		return n;
	}

	const std::vector<Instance>* find( ImageId image ) const
	{
		const auto it = images.find( image );
		return it == images.end() ? nullptr : &it->second;
	}

	void validate() const
	{
		if( num_classes < 2 ) {
			throw std::invalid_argument( "annotation set '" + source_name + "' needs at least two classes" );
		}
		for( const auto& [image, instances] : images ) {
			for( const Instance& inst : instances ) {
				if( inst.label < 1 || inst.label > num_classes ) {
					throw std::invalid_argument( "annotation " + std::to_string( inst.id ) + " in image "
						+ std::to_string( image ) + " has label " + std::to_string( inst.label ) + " outside 1.."
						+ std::to_string( num_classes ) );
				}
				if( !inst.box.valid() ) {
					throw std::invalid_argument( "annotation " + std::to_string( inst.id ) + " has a degenerate box" );
				}
			}
		}
	}

	friend bool operator==( const AnnotationSet&, const AnnotationSet& ) = default;
};

} // namespace ivbeta
