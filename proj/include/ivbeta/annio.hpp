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

// Annotation / detection interchange format: a COCO-style JSON subset.
//
//   {
//     "images":      [ { "id": 1, "width": 640, "height": 480, "file_name": "a.jpg" } ],
//     "categories":  [ { "id": 1, "name": "Unripe" }, ... ],
//     "annotations": [ { "id": 7, "image_id": 1, "category_id": 2,
//                        "bbox": [x, y, w, h], "score": 0.93 } ]
//   }
//
// "score" is optional and marks detection files. Category ids map to class
// indices 1..K in ascending id order unless an explicit order is given.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include <ivbeta/annotations.hpp>

namespace ivbeta {

/// Raised for malformed or inconsistent annotation files; the message starts
/// with the JSON path of the offending element.
class FormatError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct ImageInfo {
	ImageId id = 0;
	std::int64_t width = 0;
	std::int64_t height = 0;
	std::string fileName;

	friend bool operator==( const ImageInfo&, const ImageInfo& ) = default;
};

struct CategoryInfo {
	std::int64_t id = 0;
	std::string name;

	friend bool operator==( const CategoryInfo&, const CategoryInfo& ) = default;
};

struct AnnotationRecord {
	AnnotationId id = 0;
	ImageId imageId = 0;
	std::int64_t categoryId = 0;
	BoundingBox bbox;
	std::optional<double> score;

	friend bool operator==( const AnnotationRecord&, const AnnotationRecord& ) = default;
};

struct AnnotationFile {
	std::vector<ImageInfo> images;
	std::vector<CategoryInfo> categories;
	std::vector<AnnotationRecord> annotations;
	std::vector<std::int64_t> classOrder; // category id of class 1, 2, ..., K

	int num_classes() const { return static_cast<int>( classOrder.size() ); }

	int class_of( std::int64_t categoryId ) const
	{
		const auto it = std::find( classOrder.begin(), classOrder.end(), categoryId );
		if( it == classOrder.end() ) {
			throw FormatError( "unknown category id " + std::to_string( categoryId ) );
		}
		return static_cast<int>( it - classOrder.begin() ) + 1;
	}

	std::int64_t category_of( int label ) const { return classOrder.at( static_cast<std::size_t>( label - 1 ) ); }

	std::vector<std::string> class_names() const
	{
		std::vector<std::string> names;
		for( std::int64_t id : classOrder ) {
			for( const auto& c : categories ) {
				if( c.id == id ) {
					names.push_back( c.name );
				}
			}
		}
		return names;
	}

	bool has_scores() const
	{
		return std::any_of( annotations.begin(), annotations.end(), []( const auto& a ) { return a.score.has_value(); } );
	}

	friend bool operator==( const AnnotationFile&, const AnnotationFile& ) = default;
};

struct ParseOptions {
	/// Category ids in class order; empty means ascending id order.
	std::vector<std::int64_t> classOrder;
};

namespace detail {

using json = nlohmann::json;

inline const json& require_field( const json& obj, const char* key, const std::string& path )
{
	if( !obj.is_object() ) {
		throw FormatError( path + ": expected an object" );
	}
	const auto it = obj.find( key );
	if( it == obj.end() ) {
		throw FormatError( path + ": missing field \"" + key + "\"" );
	}
	return *it;
}

inline std::int64_t require_int( const json& obj, const char* key, const std::string& path )
{
	const json& v = require_field( obj, key, path );
	if( !v.is_number_integer() ) {
		throw FormatError( path + "." + key + ": expected an integer" );
	}
	return v.get<std::int64_t>();
}

inline double require_number( const json& v, const std::string& path )
{
	if( !v.is_number() ) {
		throw FormatError( path + ": expected a number" );
	}
	const double d = v.get<double>();
	if( !std::isfinite( d ) ) {
		throw FormatError( path + ": expected a finite number" );
	}
	return d;
}

inline const json& require_array( const json& root, const char* key )
{
	const json& v = require_field( root, key, "$" );
	if( !v.is_array() ) {
		throw FormatError( std::string( "$." ) + key + ": expected an array" );
	}
	return v;
}

} // namespace detail

inline AnnotationFile parse_annotations( std::string_view text, const ParseOptions& options = {} )
{
	using detail::json;
	json root;
	try {
		root = json::parse( text );
	} catch( const json::parse_error& e ) {
		throw FormatError( std::string( "$: malformed JSON: " ) + e.what() );
	}
	if( !root.is_object() ) {
		throw FormatError( "$: expected a top-level object" );
	}

	AnnotationFile file;
	const json& images = detail::require_array( root, "images" );
	for( std::size_t i = 0; i < images.size(); ++i ) {
		const std::string path = "$.images[" + std::to_string( i ) + "]";
		ImageInfo info;
		info.id = detail::require_int( images[i], "id", path );
		info.width = detail::require_int( images[i], "width", path );
		info.height = detail::require_int( images[i], "height", path );
		const json& name = detail::require_field( images[i], "file_name", path );
		if( !name.is_string() ) {
			throw FormatError( path + ".file_name: expected a string" );
		}
		info.fileName = name.get<std::string>();
		if( info.width <= 0 || info.height <= 0 ) {
			throw FormatError( path + ": image size must be positive" );
		}
		for( const auto& prev : file.images ) {
			if( prev.id == info.id ) {
				throw FormatError( path + ".id: duplicate image id " + std::to_string( info.id ) );
			}
		}
		file.images.push_back( std::move( info ) );
	}

	const json& categories = detail::require_array( root, "categories" );
	for( std::size_t i = 0; i < categories.size(); ++i ) {
		const std::string path = "$.categories[" + std::to_string( i ) + "]";
		CategoryInfo c;
		c.id = detail::require_int( categories[i], "id", path );
		const json& name = detail::require_field( categories[i], "name", path );
		if( !name.is_string() ) {
			throw FormatError( path + ".name: expected a string" );
		}
		c.name = name.get<std::string>();
		for( const auto& prev : file.categories ) {
			if( prev.id == c.id ) {
				throw FormatError( path + ".id: duplicate category id " + std::to_string( c.id ) );
			}
		}
		file.categories.push_back( std::move( c ) );
	}
	if( file.categories.size() < 2 ) {
		throw FormatError( "$.categories: at least two categories are required" );
	}

	if( options.classOrder.empty() ) {
		for( const auto& c : file.categories ) {
			file.classOrder.push_back( c.id );
		}
		std::sort( file.classOrder.begin(), file.classOrder.end() );
	} else {
		file.classOrder = options.classOrder;
		auto sorted = file.classOrder;
		std::sort( sorted.begin(), sorted.end() );
		std::vector<std::int64_t> ids;
		for( const auto& c : file.categories ) {
			ids.push_back( c.id );
		}
		std::sort( ids.begin(), ids.end() );
		if( sorted != ids ) {
			throw FormatError( "$.categories: explicit class order must list every category id exactly once" );
		}
	}

	const json& annotations = detail::require_array( root, "annotations" );
	std::vector<AnnotationId> seen;
	for( std::size_t i = 0; i < annotations.size(); ++i ) {
		const json& a = annotations[i];
		std::string path = "$.annotations[" + std::to_string( i ) + "]";
		AnnotationRecord rec;
		rec.id = detail::require_int( a, "id", path );
		path += "(id=" + std::to_string( rec.id ) + ")";
		rec.imageId = detail::require_int( a, "image_id", path );
		rec.categoryId = detail::require_int( a, "category_id", path );
		const json& bbox = detail::require_field( a, "bbox", path );
		if( !bbox.is_array() || bbox.size() != 4 ) {
			throw FormatError( path + ".bbox: expected [x, y, width, height]" );
		}
		rec.bbox = { detail::require_number( bbox[0], path + ".bbox[0]" ),
			detail::require_number( bbox[1], path + ".bbox[1]" ), detail::require_number( bbox[2], path + ".bbox[2]" ),
			detail::require_number( bbox[3], path + ".bbox[3]" ) };
		if( !( rec.bbox.w > 0.0 ) || !( rec.bbox.h > 0.0 ) ) {
			throw FormatError( path + ".bbox: width and height must be positive" );
		}
		if( const auto s = a.find( "score" ); s != a.end() ) {
			const double score = detail::require_number( *s, path + ".score" );
			if( score < 0.0 || score > 1.0 ) {
				throw FormatError( path + ".score: must lie in [0, 1]" );
			}
			rec.score = score;
		}
		const bool imageKnown = std::any_of(
			file.images.begin(), file.images.end(), [&]( const ImageInfo& im ) { return im.id == rec.imageId; } );
		if( !imageKnown ) {
			throw FormatError( path + ".image_id: annotation " + std::to_string( rec.id ) + " references missing image "
				+ std::to_string( rec.imageId ) );
		}
		const bool categoryKnown = std::find( file.classOrder.begin(), file.classOrder.end(), rec.categoryId )
			!= file.classOrder.end();
		if( !categoryKnown ) {
			throw FormatError( path + ".category_id: annotation " + std::to_string( rec.id )
				+ " references missing category " + std::to_string( rec.categoryId ) );
		}
		seen.push_back( rec.id );
		file.annotations.push_back( rec );
	}
	std::sort( seen.begin(), seen.end() );
	if( const auto dup = std::adjacent_find( seen.begin(), seen.end() ); dup != seen.end() ) {
		throw FormatError( "$.annotations: duplicate annotation id " + std::to_string( *dup ) );
	}
	return file;
}

/// Deterministic JSON text: fixed key order, two-space indent, shortest
/// round-trip number formatting, trailing newline.
inline std::string serialize_annotations( const AnnotationFile& file )
{
	using ordered = nlohmann::ordered_json;
	ordered root = ordered::object();
	ordered images = ordered::array();
	for( const auto& im : file.images ) {
		ordered o = ordered::object();
		o["id"] = im.id;
		o["width"] = im.width;
		o["height"] = im.height;
		o["file_name"] = im.fileName;
		images.push_back( std::move( o ) );
	}
	ordered categories = ordered::array();
	for( const auto& c : file.categories ) {
		ordered o = ordered::object();
		o["id"] = c.id;
		o["name"] = c.name;
		categories.push_back( std::move( o ) );
	}
	ordered annotations = ordered::array();
	for( const auto& a : file.annotations ) {
		ordered o = ordered::object();
		o["id"] = a.id;
		o["image_id"] = a.imageId;
		o["category_id"] = a.categoryId;
		o["bbox"] = ordered::array( { a.bbox.x, a.bbox.y, a.bbox.w, a.bbox.h } );
		if( a.score ) {
			o["score"] = *a.score;
		}
		annotations.push_back( std::move( o ) );
	}
	root["images"] = std::move( images );
	root["categories"] = std::move( categories );
	root["annotations"] = std::move( annotations );
	return root.dump( 2 ) + "\n";
}

inline std::string read_text_file( const std::string& path )
{
	std::ifstream in( path, std::ios::binary );
	if( !in ) {
		throw FormatError( path + ": cannot open file" );
	}
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

inline void write_text_file( const std::string& path, const std::string& text )
{
	std::ofstream out( path, std::ios::binary | std::ios::trunc );
	if( !out ) {
		throw std::runtime_error( path + ": cannot open file for writing" );
	}
	out << text;
	if( !out ) {
		throw std::runtime_error( path + ": write failed" );
	}
}

inline AnnotationFile load_annotations( const std::string& path, const ParseOptions& options = {} )
{
	const std::string text = read_text_file( path );
	try {
		return parse_annotations( text, options );
	} catch( const FormatError& e ) {
		throw FormatError( path + ": " + e.what() );
	}
}

/// Grouped view used by matching, noise injection and evaluation. Instances
/// keep the file's annotation order within each image.
inline AnnotationSet to_annotation_set( const AnnotationFile& file, std::string sourceName = {} )
{
	AnnotationSet set;
	set.source_name = std::move( sourceName );
	set.num_classes = file.num_classes();
	for( const auto& im : file.images ) {
		set.images[im.id];
	}
	for( const auto& a : file.annotations ) {
		set.images[a.imageId].push_back( { a.id, a.bbox, file.class_of( a.categoryId ), a.score } );
	}
	return set;
}

/// Copy of `file` whose category ids follow the labels in `set`, matched by
/// annotation id. Everything else is left as is.
inline AnnotationFile with_labels( const AnnotationFile& file, const AnnotationSet& set )
{
	std::map<AnnotationId, int> labels;
	for( const auto& [image, instances] : set.images ) {
		for( const Instance& inst : instances ) {
			labels[inst.id] = inst.label;
		}
	}
	AnnotationFile out = file;
	for( auto& a : out.annotations ) {
		const auto it = labels.find( a.id );
		if( it == labels.end() ) {
			throw std::invalid_argument( "with_labels: annotation " + std::to_string( a.id ) + " missing from set" );
		}
		a.categoryId = out.category_of( it->second );
	}
	return out;
}

/// Builds a file from an annotation set, with one category per class.
inline AnnotationFile from_annotation_set( const AnnotationSet& set, std::vector<std::string> classNames,
	std::int64_t imageWidth, std::int64_t imageHeight )
{
	AnnotationFile file;
	if( static_cast<int>( classNames.size() ) != set.num_classes ) {
		throw std::invalid_argument( "from_annotation_set: need one name per class" );
	}
	for( int k = 1; k <= set.num_classes; ++k ) {
		file.categories.push_back( { k, classNames[static_cast<std::size_t>( k - 1 )] } );
		file.classOrder.push_back( k );
	}
	for( const auto& [image, instances] : set.images ) {
		file.images.push_back( { image, imageWidth, imageHeight, "image_" + std::to_string( image ) + ".jpg" } );
		for( const Instance& inst : instances ) {
			file.annotations.push_back( { inst.id, image, inst.label, inst.box, inst.score } );
		}
	}
	return file;
}

} // namespace ivbeta
