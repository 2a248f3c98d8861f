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

// Test-only oracle: the Beta CDF by direct numerical integration of the
// density in extended precision. Shares no code with the library's
// continued-fraction evaluation (normalization uses std::lgammal).

#include <algorithm>
#include <cmath>
#include <vector>

namespace ivbeta::oracle {

using real = long double;

struct GaussLegendre {
	std::vector<real> nodes;
	std::vector<real> weights;

	explicit GaussLegendre( int n )
	{
		const real pi = 3.141592653589793238462643383279502884L;
		for( int i = 1; i <= n; ++i ) {
			real x = std::cos( pi * ( i - 0.25L ) / ( n + 0.5L ) );
			real dp = 0;
			for( int it = 0; it < 100; ++it ) {
				real p0 = 1;
				real p1 = x;
				for( int k = 2; k <= n; ++k ) {
					const real p2 = ( ( 2 * k - 1 ) * x * p1 - ( k - 1 ) * p0 ) / k;
					p0 = p1;
					p1 = p2;
				}
				dp = n * ( x * p1 - p0 ) / ( x * x - 1 );
				const real dx = p1 / dp;
				x -= dx;
				if( std::fabs( dx ) < 1e-21L ) {
					break;
				}
			}
			nodes.push_back( x );
			weights.push_back( 2 / ( ( 1 - x * x ) * dp * dp ) );
		}
	}

	template<class F>
	real integrate( const F& f, real lo, real hi ) const
	{
		const real mid = ( lo + hi ) / 2;
		const real half = ( hi - lo ) / 2;
		real sum = 0;
		for( std::size_t i = 0; i < nodes.size(); ++i ) {
			sum += weights[i] * f( mid + half * nodes[i] );
		}
		return sum * half;
	}
};

inline const GaussLegendre& gauss30()
{
	static const GaussLegendre rule( 30 );
	return rule;
}

template<class F>
real adaptive( const F& f, real lo, real hi, real whole, int depth )
{
	const real mid = ( lo + hi ) / 2;
	const real left = gauss30().integrate( f, lo, mid );
	const real right = gauss30().integrate( f, mid, hi );
	const real both = left + right;
	if( depth <= 0 || std::fabs( both - whole ) <= 1e-14L * std::fabs( both ) || both == 0 ) {
		return both;
	}
	return adaptive( f, lo, mid, left, depth - 1 ) + adaptive( f, mid, hi, right, depth - 1 );
}

// Integral of t^(a-1) (1-t)^(b-1) / B(a, b) over [0, x].
inline real lower_tail( real x, real a, real b )
{
	if( x <= 0 ) {
		return 0;
	}
	const real lnB = std::lgamma( a ) + std::lgamma( b ) - std::lgamma( a + b );
	auto density = [&]( real t ) -> real {
		if( t <= 0 ) {
			return 0;
		}
		return std::exp( ( a - 1 ) * std::log( t ) + ( b - 1 ) * std::log1p( -t ) - lnB );
	};

	// Singular neighbourhood of 0, by term-wise integration of the binomial
	// series of (1-t)^(b-1).
	const real eps = x * std::ldexp( 1.0L, -64 );
	real head = 0;
	{
		real coef = 1;
		for( int k = 0; k < 4; ++k ) {
			head += coef * std::exp( ( a + k ) * std::log( eps ) - lnB ) / ( a + k );
			coef *= ( k + 1 - b ) / ( k + 1 );
		}
	}

	std::vector<real> cuts;
	for( int j = 0; j <= 64; ++j ) {
		cuts.push_back( x * std::ldexp( 1.0L, -j ) );
	}
	const real sum = a + b;
	const real sd = std::sqrt( a * b / ( sum * sum * ( sum + 1 ) ) );
	const real center = ( a > 1 && b > 1 ) ? ( a - 1 ) / ( sum - 2 ) : a / sum;
	for( real k : { 0.0L, 0.5L, 1.0L, 2.0L, 4.0L, 8.0L, 16.0L, 32.0L, 64.0L } ) {
		for( real s : { -1.0L, 1.0L } ) {
			const real t = center + s * k * sd;
			if( t > eps && t < x ) {
				cuts.push_back( t );
			}
		}
	}
	std::sort( cuts.begin(), cuts.end() );
	cuts.erase( std::unique( cuts.begin(), cuts.end() ), cuts.end() );

	real total = head;
	for( std::size_t i = 0; i + 1 < cuts.size(); ++i ) {
		const real lo = cuts[i];
		const real hi = cuts[i + 1];
		total += adaptive( density, lo, hi, gauss30().integrate( density, lo, hi ), 30 );
	}
	return total;
}

/// Lower and upper tails of the Beta(a, b) distribution at x. The tail on the
/// near side of the mean is integrated directly; the other is its complement.
struct Tails {
	real lower;
	real upper;
};

inline Tails beta_tails( real x, real a, real b )
{
	if( x <= a / ( a + b ) ) {
		const real lo = lower_tail( x, a, b );
		return { lo, 1 - lo };
	}
	const real up = lower_tail( 1 - x, b, a );
	return { 1 - up, up };
}

} // namespace ivbeta::oracle
