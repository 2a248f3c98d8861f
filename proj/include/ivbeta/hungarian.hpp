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

// Minimum-cost bipartite assignment (Hungarian algorithm, shortest augmenting
// paths with row/column potentials), O(n^2 m) for an n x m matrix with n <= m.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ivbeta {

/// Dense row-major matrix of costs.
class CostMatrix {
public:
	CostMatrix() = default;
	CostMatrix( std::size_t rows, std::size_t cols, double fill = 0.0 ) :
		rows_( rows ), cols_( cols ), data_( rows * cols, fill )
	{
	}
	CostMatrix( std::initializer_list<std::initializer_list<double>> rows )
	{
		rows_ = rows.size();
		cols_ = rows_ == 0 ? 0 : rows.begin()->size();
		for( const auto& r : rows ) {
			if( r.size() != cols_ ) {
				throw std::invalid_argument( "cost matrix rows must have equal length" );
			}
			data_.insert( data_.end(), r.begin(), r.end() );
		}
	}

	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }
	double& operator()( std::size_t r, std::size_t c ) { return data_[r * cols_ + c]; }
	double operator()( std::size_t r, std::size_t c ) const { return data_[r * cols_ + c]; }

	CostMatrix transposed() const
	{
		CostMatrix t( cols_, rows_ );
		for( std::size_t r = 0; r < rows_; ++r ) {
			for( std::size_t c = 0; c < cols_; ++c ) {
				t( c, r ) = ( *this )( r, c );
			}
		}
		return t;
	}

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<double> data_;
};

struct Assignment {
	std::vector<std::pair<std::size_t, std::size_t>> pairs; // (row, col), ascending by row
	double cost = 0.0;
};

namespace detail {

// Requires rows <= cols. Returns for each row the assigned column.
inline std::vector<std::size_t> hungarian_wide( const CostMatrix& cost )
{
	const std::size_t n = cost.rows();
	const std::size_t m = cost.cols();
	const double inf = std::numeric_limits<double>::infinity();
	// 1-based indexing; column 0 is the virtual start of each augmenting path.
	std::vector<double> u( n + 1, 0.0 );
	std::vector<double> v( m + 1, 0.0 );
	std::vector<std::size_t> rowOfCol( m + 1, 0 );
	std::vector<std::size_t> way( m + 1, 0 );
	for( std::size_t i = 1; i <= n; ++i ) {
		rowOfCol[0] = i;
		std::size_t j0 = 0;
		std::vector<double> minv( m + 1, inf );
		std::vector<char> used( m + 1, 0 );
		do {
			used[j0] = 1;
			const std::size_t i0 = rowOfCol[j0];
			double delta = inf;
			std::size_t j1 = 0;
			for( std::size_t j = 1; j <= m; ++j ) {
				if( used[j] ) {
					continue;
				}
				const double cur = cost( i0 - 1, j - 1 ) - u[i0] - v[j];
				if( cur < minv[j] ) {
					minv[j] = cur;
					way[j] = j0;
				}
				if( minv[j] < delta ) {
					delta = minv[j];
					j1 = j;
				}
			}
			for( std::size_t j = 0; j <= m; ++j ) {
				if( used[j] ) {
					u[rowOfCol[j]] += delta;
					v[j] -= delta;
				} else {
					minv[j] -= delta;
				}
			}
			j0 = j1;
		} while( rowOfCol[j0] != 0 );
		do {
			const std::size_t j1 = way[j0];
			rowOfCol[j0] = rowOfCol[j1];
			j0 = j1;
		} while( j0 != 0 );
	}
	std::vector<std::size_t> colOfRow( n, 0 );
	for( std::size_t j = 1; j <= m; ++j ) {
		if( rowOfCol[j] != 0 ) {
			colOfRow[rowOfCol[j] - 1] = j - 1;
		}
	}
	return colOfRow;
}

} // namespace detail

/// Minimum-total-cost one-to-one assignment of min(rows, cols) pairs.
inline Assignment hungarian( const CostMatrix& cost )
{
	if( cost.rows() == 0 || cost.cols() == 0 ) {
		throw std::invalid_argument( "hungarian: cost matrix must be non-empty" );
	}
	for( std::size_t r = 0; r < cost.rows(); ++r ) {
		for( std::size_t c = 0; c < cost.cols(); ++c ) {
			if( !std::isfinite( cost( r, c ) ) ) {
				throw std::invalid_argument( "hungarian: non-finite cost at (" + std::to_string( r ) + ", "
					+ std::to_string( c ) + ")" );
			}
		}
	}
	Assignment result;
	if( cost.rows() <= cost.cols() ) {
		const auto cols = detail::hungarian_wide( cost );
		for( std::size_t r = 0; r < cols.size(); ++r ) {
			result.pairs.emplace_back( r, cols[r] );
		}
	} else {
		const auto rows = detail::hungarian_wide( cost.transposed() );
		std::vector<std::pair<std::size_t, std::size_t>> pairs;
		for( std::size_t c = 0; c < rows.size(); ++c ) {
			pairs.emplace_back( rows[c], c );
		}
		std::sort( pairs.begin(), pairs.end() );
		result.pairs = std::move( pairs );
	}
	for( const auto& [r, c] : result.pairs ) {
		result.cost += cost( r, c );
	}
	return result;
}

} // namespace ivbeta
