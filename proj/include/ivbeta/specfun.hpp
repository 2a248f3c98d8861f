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

// Beta-function special functions: log-gamma, log-Beta, the regularized
// incomplete Beta function I_x(a, b) and its partial derivatives with
// respect to both shape parameters.
//
// All functions are pure and thread-safe.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ivbeta {

/// Shape parameters (alpha, beta) of a Beta distribution. Both must be positive.
struct ShapePair {
	double alpha = 1.0;
	double beta = 1.0;
};

namespace detail {

inline void require_shape( double a, double b, const char* where )
{
	if( !std::isfinite( a ) || !std::isfinite( b ) || !( a > 0 ) || !( b > 0 ) ) {
		throw std::domain_error( std::string( where ) + ": shape parameters must be finite and positive (alpha="
			+ std::to_string( a ) + ", beta=" + std::to_string( b ) + ")" );
	}
}

inline void require_unit( double x, const char* where )
{
	if( !std::isfinite( x ) || x < 0.0 || x > 1.0 ) {
		throw std::domain_error( std::string( where ) + ": x must lie in [0, 1] (x=" + std::to_string( x ) + ")" );
	}
}

// Lanczos approximation N=13, g=6.0246800407767295837 (double-precision
// coefficients from Boost.Math, lanczos13m53).
constexpr double lanczosG = 6.024680040776729583740234375;

// Sum scaled by exp(-g); Gamma(z) = sum(z) * ((z + g - 0.5) / e)^(z - 0.5).
inline double lanczos_sum_expG_scaled( double z )
{
	static constexpr std::array<double, 13> num = {
		56906521.91347156388090791033559122686859,
		103794043.1163445451906271053616070238554,
		86363131.28813859145546927288977868422342,
		43338889.32467613834773723740590533316085,
		14605578.08768506808414169982791359218571,
		3481712.15498064590882071018964774556468,
		601859.6171681098786670226533699352302507,
		75999.29304014542649875303443598909137092,
		6955.999602515376140356310115515198987526,
		449.9445569063168119446858607650988409623,
		19.51992788247617482847860966235652136208,
		0.5098416655656676188125178644804694509993,
		0.006061842346248906525783753964555936883222 };
	static constexpr std::array<double, 13> denom = {
		0.0, 39916800.0, 120543840.0, 150917976.0, 105258076.0, 45995730.0,
		13339535.0, 2637558.0, 357423.0, 32670.0, 1925.0, 66.0, 1.0 };

	double n = 0.0;
	double d = 0.0;
	if( z <= 1.0 ) {
		for( int i = 12; i >= 0; --i ) {
			n = n * z + num[i];
			d = d * z + denom[i];
		}
	} else {
		// Evaluate in 1/z to keep the polynomials from overflowing.
		const double r = 1.0 / z;
		for( int i = 0; i <= 12; ++i ) {
			n = n * r + num[i];
			d = d * r + denom[i];
		}
	}
	return n / d;
}

// x - log(1 + x), accurate for small |x|.
inline double rlog1( double x )
{
	if( std::fabs( x ) < 0.1 ) {
		// sum_{k>=2} (-1)^k x^k / k
		double term = x * x;
		double sum = 0.0;
		for( int k = 2; k < 60; ++k ) {
			const double t = term / k;
			sum += ( k % 2 == 0 ) ? t : -t;
			if( std::fabs( t ) <= 1e-18 * std::fabs( sum ) ) {
				break;
			}
			term *= x;
		}
		return sum;
	}
	return x - std::log1p( x );
}

} // namespace detail

/// ln Gamma(z) for z > 0 via the Lanczos approximation.
inline double ln_gamma( double z )
{
	if( !std::isfinite( z ) || !( z > 0 ) ) {
		throw std::domain_error( "ln_gamma: argument must be finite and positive" );
	}
	if( z == 1.0 || z == 2.0 ) {
		return 0.0;
	}
	const double zgh = z + detail::lanczosG - 0.5;
	return ( z - 0.5 ) * ( std::log( zgh ) - 1.0 ) + std::log( detail::lanczos_sum_expG_scaled( z ) );
}

/// Digamma psi(z) = d/dz ln Gamma(z) for z > 0.
inline double digamma( double z )
{
	if( !std::isfinite( z ) || !( z > 0 ) ) {
		throw std::domain_error( "digamma: argument must be finite and positive" );
	}
	double shift = 0.0;
	while( z < 10.0 ) {
		shift -= 1.0 / z;
		z += 1.0;
	}
	const double r = 1.0 / ( z * z );
	// Bernoulli tail: B_2k / (2k z^2k)
	const double tail = r * ( 1.0 / 12 - r * ( 1.0 / 120 - r * ( 1.0 / 252 - r * ( 1.0 / 240
		- r * ( 1.0 / 132 - r * ( 691.0 / 32760 - r * ( 1.0 / 12 ) ) ) ) ) ) );
	return shift + std::log( z ) - 0.5 / z - tail;
}

/// ln B(alpha, beta) = ln Gamma(alpha) + ln Gamma(beta) - ln Gamma(alpha + beta).
///
/// Evaluated as a single Lanczos ratio so that the large terms of the three
/// log-gammas cancel analytically instead of numerically.
inline double ln_beta( double alpha, double beta )
{
	detail::require_shape( alpha, beta, "ln_beta" );
	double a = std::max( alpha, beta );
	double b = std::min( alpha, beta );
	const double c = a + b;
	if( b == 1.0 ) {
		return -std::log( a );
	}
	const double g = detail::lanczosG - 0.5;
	const double bgh = b + g;
	const double cgh = c + g;
	const double lnSum = std::log( detail::lanczos_sum_expG_scaled( a ) )
		+ std::log( detail::lanczos_sum_expG_scaled( b ) / detail::lanczos_sum_expG_scaled( c ) );
	const double lnAc = std::log1p( -b / cgh ); // ln(agh / cgh)
	const double lnBc = std::log1p( -a / cgh ); // ln(bgh / cgh)
	return lnSum + ( a - 0.5 - b ) * lnAc + b * ( lnAc + lnBc ) + 0.5 * ( 1.0 - std::log( bgh ) );
}

namespace detail {

// Remainder of Stirling's formula: ln Gamma(z) - [(z - 1/2) ln z - z + ln(2 pi) / 2].
inline double stirling_remainder( double z )
{
	if( z >= 10.0 ) {
		const double r = 1.0 / ( z * z );
		return ( 1.0 / 12 - r * ( 1.0 / 360 - r * ( 1.0 / 1260 - r * ( 1.0 / 1680
			- r * ( 1.0 / 1188 - r * ( 691.0 / 360360 - r * ( 1.0 / 156 ) ) ) ) ) ) ) / z;
	}
	return ln_gamma( z ) - ( ( z - 0.5 ) * std::log( z ) - z + 0.5 * std::log( 2.0 * std::numbers::pi ) );
}

// One half of the centered power term: a ln(x / x0) - d where d = x c - a and
// x0 = a / c. Non-positive; computed without cancellation near x = x0.
inline double centered_log_term( double a, double c, double x, double d )
{
	const double e = d / a;
	if( std::fabs( e ) < 0.5 ) {
		return -a * rlog1( e );
	}
	const double lnRatio = std::log( x ) + std::log( c / a );
	return a * lnRatio - d;
}

// ln[ x^a y^b / B(a, b) ] with y = 1 - x, written around the mean x0 = a / (a + b)
// so that the O(a + b) terms cancel analytically.
inline double log_power_terms( double x, double y, double a, double b )
{
	const double c = a + b;
	const double d = ( x <= y ) ? x * c - a : b - y * c;
	const double ta = centered_log_term( a, c, x, d );
	const double tb = centered_log_term( b, c, y, -d );
	const double corr = stirling_remainder( a ) + stirling_remainder( b ) - stirling_remainder( c );
	return ta + tb + 0.5 * ( std::log( a ) + std::log( b ) - std::log( c ) )
		- 0.5 * std::log( 2.0 * std::numbers::pi ) - corr;
}

// Value together with first derivatives with respect to (a, b).
struct Dual {
	double v = 0.0;
	double da = 0.0;
	double db = 0.0;
};

inline Dual operator+( Dual l, Dual r ) { return { l.v + r.v, l.da + r.da, l.db + r.db }; }
inline Dual operator-( Dual l, Dual r ) { return { l.v - r.v, l.da - r.da, l.db - r.db }; }
inline Dual operator*( Dual l, Dual r ) { return { l.v * r.v, l.da * r.v + l.v * r.da, l.db * r.v + l.v * r.db }; }
inline Dual operator/( Dual l, Dual r )
{
	const double q = l.v / r.v;
	return { q, ( l.da - q * r.da ) / r.v, ( l.db - q * r.db ) / r.v };
}
inline Dual operator+( double l, Dual r ) { return { l + r.v, r.da, r.db }; }
inline Dual operator/( double l, Dual r ) { return Dual{ l, 0, 0 } / r; }

inline double value_of( double v ) { return v; }
inline double value_of( const Dual& d ) { return d.v; }

template<class T>
T make_shape( double v, bool isA );

template<>
inline double make_shape<double>( double v, bool ) { return v; }

template<>
inline Dual make_shape<Dual>( double v, bool isA ) { return isA ? Dual{ v, 1, 0 } : Dual{ v, 0, 1 }; }

template<class T>
bool cf_converged( const T& del, const T& h, double tol )
{
	if constexpr( std::is_same_v<T, Dual> ) {
		const double dla = std::fabs( h.da / h.v );
		const double dlb = std::fabs( h.db / h.v );
		return std::fabs( del.v - 1.0 ) <= tol && std::fabs( del.da ) <= tol * ( 1.0 + dla )
			&& std::fabs( del.db ) <= tol * ( 1.0 + dlb );
	} else {
		return std::fabs( del - 1.0 ) <= tol;
	}
}

template<class T>
T guard_tiny( T v )
{
	constexpr double fpmin = 1e-300;
	if( std::fabs( value_of( v ) ) < fpmin ) {
		if constexpr( std::is_same_v<T, Dual> ) {
			return Dual{ fpmin, 0, 0 };
		} else {
			return fpmin;
		}
	}
	return v;
}

// Continued fraction for I_x(a, b) (modified Lentz). T is double or Dual; with
// Dual the derivatives of every convergent are carried along.
template<class T>
T inc_beta_cf( double x, double av, double bv )
{
	const T a = make_shape<T>( av, true );
	const T b = make_shape<T>( bv, false );
	const T one{ 1.0 };
	const T qab = a + b;
	const T qap = a + one;
	const T qam = a - one;
	const T xs{ x };
	constexpr double tol = 1e-16;
	constexpr int maxIter = 100000;

	T c = one;
	T d = guard_tiny<T>( one - qab * xs / qap );
	d = 1.0 / d;
	T h = d;
	for( int m = 1; m <= maxIter; ++m ) {
		const T mm{ static_cast<double>( m ) };
		const T m2{ 2.0 * m };
		T aa = mm * ( b - mm ) * xs / ( ( qam + m2 ) * ( a + m2 ) );
		d = guard_tiny<T>( 1.0 + aa * d );
		c = guard_tiny<T>( 1.0 + aa / c );
		d = 1.0 / d;
		h = h * d * c;
		aa = T{ -1.0 } * ( a + mm ) * ( qab + mm ) * xs / ( ( a + m2 ) * ( qap + m2 ) );
		d = guard_tiny<T>( 1.0 + aa * d );
		c = guard_tiny<T>( 1.0 + aa / c );
		d = 1.0 / d;
		const T del = d * c;
		h = h * del;
		if( cf_converged( del, h, tol ) ) {
			return h;
		}
	}
	std::ostringstream msg;
	msg << "incomplete beta continued fraction failed to converge (a=" << av << ", b=" << bv << ", x=" << x << ")";
	throw std::runtime_error( msg.str() );
}

// I_x(a, b) on the side where the continued fraction converges quickly,
// i.e. x <= (a + 1) / (a + b + 2). Returns the value (and derivatives).
inline double inc_beta_lower( double x, double a, double b )
{
	const double lnPrefix = log_power_terms( x, 1.0 - x, a, b );
	if( lnPrefix < -745.2 ) {
		return 0.0;
	}
	return std::exp( lnPrefix ) * inc_beta_cf<double>( x, a, b ) / a;
}

inline Dual inc_beta_lower_dual( double x, double a, double b )
{
	const double lnPrefix = log_power_terms( x, 1.0 - x, a, b );
	if( lnPrefix < -745.2 ) {
		return {};
	}
	const double psiC = digamma( a + b );
	const double p = std::exp( lnPrefix );
	const Dual prefix{ p, p * ( std::log( x ) - digamma( a ) + psiC ), p * ( std::log1p( -x ) - digamma( b ) + psiC ) };
	return prefix * inc_beta_cf<Dual>( x, a, b ) / Dual{ a, 1, 0 };
}

inline bool use_lower_cf( double x, double a, double b )
{
	return x <= ( a + 1.0 ) / ( a + b + 2.0 );
}

} // namespace detail

/// I_x(alpha, beta) together with its complement 1 - I_x, each computed so that
/// the smaller of the two keeps full relative accuracy.
struct IncBeta {
	double value = 0.0;
	double complement = 1.0;
};

/// Regularized incomplete Beta with partial derivatives of the value with
/// respect to alpha and beta. The complement's derivatives are the negatives.
struct IncBetaGrad {
	double value = 0.0;
	double complement = 1.0;
	double dAlpha = 0.0;
	double dBeta = 0.0;
};

inline IncBeta inc_beta( double x, ShapePair shape )
{
	detail::require_shape( shape.alpha, shape.beta, "reg_inc_beta" );
	detail::require_unit( x, "reg_inc_beta" );
	if( x == 0.0 ) {
		return { 0.0, 1.0 };
	}
	if( x == 1.0 ) {
		return { 1.0, 0.0 };
	}
	const double a = shape.alpha;
	const double b = shape.beta;
	if( detail::use_lower_cf( x, a, b ) ) {
		const double v = detail::inc_beta_lower( x, a, b );
		return { v, 1.0 - v };
	}
	const double w = detail::inc_beta_lower( 1.0 - x, b, a );
	return { 1.0 - w, w };
}

inline IncBetaGrad inc_beta_grad( double x, ShapePair shape )
{
	detail::require_shape( shape.alpha, shape.beta, "grad_reg_inc_beta" );
	detail::require_unit( x, "grad_reg_inc_beta" );
	// The CDF is constant at the ends of the support.
	if( x == 0.0 ) {
		return { 0.0, 1.0, 0.0, 0.0 };
	}
	if( x == 1.0 ) {
		return { 1.0, 0.0, 0.0, 0.0 };
	}
	const double a = shape.alpha;
	const double b = shape.beta;
	if( detail::use_lower_cf( x, a, b ) ) {
		const detail::Dual v = detail::inc_beta_lower_dual( x, a, b );
		return { v.v, 1.0 - v.v, v.da, v.db };
	}
	// Reflected: I_x(a, b) = 1 - I_{1-x}(b, a); the dual's "a" slot is our b.
	const detail::Dual w = detail::inc_beta_lower_dual( 1.0 - x, b, a );
	return { 1.0 - w.v, w.v, -w.db, -w.da };
}

/// Regularized incomplete Beta function I_x(alpha, beta), the Beta CDF at x.
inline double reg_inc_beta( double x, ShapePair shape )
{
	return inc_beta( x, shape ).value;
}

struct ShapeGradient {
	double dAlpha = 0.0;
	double dBeta = 0.0;
};

/// Partial derivatives of I_x(alpha, beta) with respect to alpha and beta.
/// Exactly zero at x = 0 and x = 1.
inline ShapeGradient grad_reg_inc_beta( double x, ShapePair shape )
{
	const IncBetaGrad g = inc_beta_grad( x, shape );
	return { g.dAlpha, g.dBeta };
}

/// Beta density at x.
inline double beta_pdf( double x, ShapePair shape )
{
	detail::require_shape( shape.alpha, shape.beta, "beta_pdf" );
	detail::require_unit( x, "beta_pdf" );
	const double a = shape.alpha;
	const double b = shape.beta;
	if( x == 0.0 || x == 1.0 ) {
		const double edgeShape = ( x == 0.0 ) ? a : b;
		if( edgeShape < 1.0 ) {
			return std::numeric_limits<double>::infinity();
		}
		if( edgeShape > 1.0 ) {
			return 0.0;
		}
		return std::exp( -ln_beta( a, b ) );
	}
	return std::exp( ( a - 1.0 ) * std::log( x ) + ( b - 1.0 ) * std::log1p( -x ) - ln_beta( a, b ) );
}

/// ln(1 + e^y), overflow-safe.
inline double softplus( double y )
{
	if( !std::isfinite( y ) ) {
		throw std::domain_error( "softplus: non-finite input" );
	}
	if( y > 30.0 ) {
		return y + std::log1p( std::exp( -y ) );
	}
	return std::log1p( std::exp( y ) );
}

/// Derivative of softplus, the logistic function.
inline double softplus_deriv( double y )
{
	if( !std::isfinite( y ) ) {
		throw std::domain_error( "softplus_deriv: non-finite input" );
	}
	if( y >= 0.0 ) {
		return 1.0 / ( 1.0 + std::exp( -y ) );
	}
	const double e = std::exp( y );
	return e / ( 1.0 + e );
}

} // namespace ivbeta
