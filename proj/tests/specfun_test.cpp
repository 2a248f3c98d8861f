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
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include <ivbeta/specfun.hpp>

#include "oracles/beta_quadrature.hpp"
#include "oracles/finite_diff.hpp"

using namespace ivbeta;

namespace {

double factorial( int n )
{
	double f = 1.0;
	for( int i = 2; i <= n; ++i ) {
		f *= i;
	}
	return f;
}

} // namespace

TEST( LnGamma, IntegerFactorials )
{
	for( int n = 1; n <= 25; ++n ) {
		const double expected = std::log( factorial( n - 1 ) );
		EXPECT_NEAR( ln_gamma( n ), expected, 1e-13 * std::max( 1.0, std::fabs( expected ) ) ) << n;
	}
}

TEST( LnGamma, HalfIntegerAndLargeArguments )
{
	EXPECT_NEAR( ln_gamma( 0.5 ), 0.5 * std::log( std::numbers::pi ), 1e-15 );
	for( double z : { 1e-3, 0.1, 7.25, 123.456, 1e4, 1e6 } ) {
		const double ref = static_cast<double>( std::lgamma( static_cast<long double>( z ) ) );
		EXPECT_NEAR( ln_gamma( z ), ref, 1e-13 * std::max( 1.0, std::fabs( ref ) ) ) << z;
	}
}

TEST( Digamma, KnownValues )
{
	constexpr double eulerGamma = 0.57721566490153286061;
	EXPECT_NEAR( digamma( 1.0 ), -eulerGamma, 1e-14 );
	EXPECT_NEAR( digamma( 0.5 ), -eulerGamma - 2.0 * std::numbers::ln2, 1e-14 );
	// psi(n + 1) = psi(n) + 1/n
	for( double z : { 0.01, 0.3, 2.5, 40.0 } ) {
		EXPECT_NEAR( digamma( z + 1.0 ), digamma( z ) + 1.0 / z, 1e-12 * std::fabs( digamma( z ) + 1.0 / z ) + 1e-14 );
	}
}

TEST( LnBeta, SpecExamples )
{
	EXPECT_NEAR( ln_beta( 1.0, 1.0 ), 0.0, 1e-15 );
	EXPECT_NEAR( ln_beta( 2.0, 2.0 ), std::log( 1.0 / 6.0 ), 1e-14 );
	EXPECT_NEAR( ln_beta( 0.5, 0.5 ), std::log( std::numbers::pi ), 1e-14 );
}

TEST( LnBeta, MatchesLongDoubleLgammaOverRange )
{
	std::mt19937_64 rng( 11 );
	std::uniform_real_distribution<double> logArg( std::log( 1e-3 ), std::log( 1e6 ) );
	for( int i = 0; i < 2000; ++i ) {
		const double a = std::exp( logArg( rng ) );
		const double b = std::exp( logArg( rng ) );
		const long double la = a;
		const long double lb = b;
		const double ref = static_cast<double>( std::lgamma( la ) + std::lgamma( lb ) - std::lgamma( la + lb ) );
		// The long double reference itself cancels when |ln B| is much smaller than the terms.
		const double scale = std::fabs( std::lgamma( la ) ) + std::fabs( std::lgamma( lb ) ) + std::fabs( std::lgamma( la + lb ) );
		EXPECT_NEAR( ln_beta( a, b ), ref, 1e-12 * std::fabs( ref ) + 1e-17 * scale ) << a << ' ' << b;
	}
}

TEST( LnBeta, RejectsInvalidShapes )
{
	EXPECT_THROW( ln_beta( 0.0, 1.0 ), std::domain_error );
	EXPECT_THROW( ln_beta( 1.0, -2.0 ), std::domain_error );
	EXPECT_THROW( ln_beta( std::numeric_limits<double>::quiet_NaN(), 1.0 ), std::domain_error );
	EXPECT_THROW( ln_beta( 1.0, std::numeric_limits<double>::infinity() ), std::domain_error );
}

TEST( RegIncBeta, SpecExamples )
{
	EXPECT_NEAR( reg_inc_beta( 0.7, { 1.0, 1.0 } ), 0.7, 1e-15 );
	EXPECT_NEAR( reg_inc_beta( 0.5, { 3.0, 3.0 } ), 0.5, 1e-14 );
	const double closedForm = 3.0 / 9.0 - 2.0 / 27.0; // 3x^2 - 2x^3 at x = 1/3
	EXPECT_NEAR( closedForm, 7.0 / 27.0, 1e-16 );
	EXPECT_NEAR( reg_inc_beta( 1.0 / 3.0, { 2.0, 2.0 } ), 7.0 / 27.0, 1e-14 );
	const double quad = static_cast<double>( oracle::beta_tails( 1.0L / 3.0L, 2.0L, 2.0L ).lower );
	EXPECT_NEAR( reg_inc_beta( 1.0 / 3.0, { 2.0, 2.0 } ), quad, 1e-13 );
}

TEST( RegIncBeta, EndpointsAndDomain )
{
	for( ShapePair s : { ShapePair{ 0.01, 0.01 }, ShapePair{ 2.0, 5.0 }, ShapePair{ 1e4, 3.0 } } ) {
		EXPECT_EQ( reg_inc_beta( 0.0, s ), 0.0 );
		EXPECT_EQ( reg_inc_beta( 1.0, s ), 1.0 );
	}
	EXPECT_THROW( reg_inc_beta( -0.1, { 1.0, 1.0 } ), std::domain_error );
	EXPECT_THROW( reg_inc_beta( 1.5, { 1.0, 1.0 } ), std::domain_error );
	EXPECT_THROW( reg_inc_beta( 0.5, { 0.0, 1.0 } ), std::domain_error );
	EXPECT_THROW( reg_inc_beta( std::numeric_limits<double>::quiet_NaN(), { 1.0, 1.0 } ), std::domain_error );
}

TEST( RegIncBeta, ClosedFormsForUnitShape )
{
	// I_x(a, 1) = x^a and I_x(1, b) = 1 - (1 - x)^b
	for( double x : { 1e-6, 0.1, 0.5, 0.9, 0.999999 } ) {
		for( double a : { 0.01, 0.5, 3.0, 250.0 } ) {
			const double pa = std::pow( x, a );
			EXPECT_NEAR( reg_inc_beta( x, { a, 1.0 } ), pa, 1e-13 * pa ) << x << ' ' << a;
			const double qb = -std::expm1( a * std::log1p( -x ) );
			EXPECT_NEAR( reg_inc_beta( x, { 1.0, a } ), qb, 1e-13 * qb ) << x << ' ' << a;
		}
	}
}

TEST( RegIncBeta, QuadratureOracleSmallGrid )
{
	std::mt19937_64 rng( 3 );
	std::uniform_real_distribution<double> logShape( std::log( 0.01 ), std::log( 1e4 ) );
	std::uniform_real_distribution<double> unit( 0.0, 1.0 );
	for( int i = 0; i < 100; ++i ) {
		const double a = std::exp( logShape( rng ) );
		const double b = std::exp( logShape( rng ) );
		const double x = unit( rng );
		const IncBeta v = inc_beta( x, { a, b } );
		const oracle::Tails t = oracle::beta_tails( x, a, b );
		for( auto [got, want] : { std::pair{ v.value, t.lower }, std::pair{ v.complement, t.upper } } ) {
			const double ref = static_cast<double>( want );
			if( std::fabs( ref ) >= std::numeric_limits<double>::min() ) {
				EXPECT_LE( std::fabs( got - ref ), 1e-10 * std::fabs( ref ) ) << x << ' ' << a << ' ' << b;
			} else {
				EXPECT_LE( std::fabs( got - ref ), std::numeric_limits<double>::min() );
			}
		}
	}
}

TEST( RegIncBeta, ReflectionAndMonotonicity )
{
	std::mt19937_64 rng( 5 );
	std::uniform_real_distribution<double> logShape( std::log( 0.01 ), std::log( 1e4 ) );
	std::uniform_real_distribution<double> unit( 0.0, 1.0 );
	for( int i = 0; i < 2000; ++i ) {
		const double a = std::exp( logShape( rng ) );
		const double b = std::exp( logShape( rng ) );
		const double x = unit( rng );
		const double sum = reg_inc_beta( x, { a, b } ) + reg_inc_beta( 1.0 - x, { b, a } );
		EXPECT_NEAR( sum, 1.0, 1e-12 ) << x << ' ' << a << ' ' << b;
		const double x2 = x + ( 1.0 - x ) * unit( rng );
		const double lo = reg_inc_beta( x, { a, b } );
		const double hi = reg_inc_beta( x2, { a, b } );
		EXPECT_LE( lo, hi );
		EXPECT_GE( lo, 0.0 );
		EXPECT_LE( hi, 1.0 );
	}
}

TEST( GradRegIncBeta, SymmetricMidpoint )
{
	const ShapeGradient g = grad_reg_inc_beta( 0.5, { 2.0, 2.0 } );
	EXPECT_NEAR( g.dAlpha, -g.dBeta, 1e-15 );
	EXPECT_LT( g.dAlpha, 0.0 );
}

TEST( GradRegIncBeta, OracleValues )
{
	const auto fd = oracle::fd_inc_beta_grad( 0.3, 2.0, 5.0 );
	const ShapeGradient g = grad_reg_inc_beta( 0.3, { 2.0, 5.0 } );
	EXPECT_LE( oracle::relative_error( g.dAlpha, fd.dAlpha ), 1e-6 );
	EXPECT_LE( oracle::relative_error( g.dBeta, fd.dBeta ), 1e-6 );

	// I_x(a, 1) = x^a, so dI/da = x^a ln x; at a = 1 that is 0.9 ln 0.9.
	const ShapeGradient u = grad_reg_inc_beta( 0.9, { 1.0, 1.0 } );
	EXPECT_NEAR( u.dAlpha, 0.9 * std::log( 0.9 ), 1e-14 );
	EXPECT_NEAR( u.dAlpha, -0.0948244640920, 1e-12 );
	const auto fdu = oracle::fd_inc_beta_grad( 0.9, 1.0, 1.0 );
	EXPECT_LE( oracle::relative_error( u.dAlpha, fdu.dAlpha ), 1e-6 );
	EXPECT_LE( oracle::relative_error( u.dBeta, fdu.dBeta ), 1e-6 );
}

TEST( GradRegIncBeta, ZeroAtEndpoints )
{
	for( double x : { 0.0, 1.0 } ) {
		const ShapeGradient g = grad_reg_inc_beta( x, { 2.5, 0.3 } );
		EXPECT_EQ( g.dAlpha, 0.0 );
		EXPECT_EQ( g.dBeta, 0.0 );
	}
}

TEST( GradRegIncBeta, RandomGridAgainstFiniteDifferences )
{
	std::mt19937_64 rng( 17 );
	std::uniform_real_distribution<double> logShape( std::log( 0.1 ), std::log( 50.0 ) );
	std::uniform_real_distribution<double> xs( 0.05, 0.95 );
	for( int i = 0; i < 300; ++i ) {
		const double a = std::exp( logShape( rng ) );
		const double b = std::exp( logShape( rng ) );
		const double x = xs( rng );
		const ShapeGradient g = grad_reg_inc_beta( x, { a, b } );
		const auto fd = oracle::fd_inc_beta_grad( x, a, b );
		EXPECT_LE( oracle::relative_error( g.dAlpha, fd.dAlpha ), 1e-6 ) << x << ' ' << a << ' ' << b;
		EXPECT_LE( oracle::relative_error( g.dBeta, fd.dBeta ), 1e-6 ) << x << ' ' << a << ' ' << b;
		// Increasing alpha moves mass right, so the CDF falls; beta does the opposite.
		EXPECT_LE( g.dAlpha, 0.0 );
		EXPECT_GE( g.dBeta, 0.0 );
	}
}

TEST( Softplus, Values )
{
	EXPECT_NEAR( softplus( 0.0 ), std::numbers::ln2, 1e-16 );
	EXPECT_NEAR( softplus( 100.0 ), 100.0, 1e-12 );
	EXPECT_TRUE( std::isfinite( softplus( 1e300 ) ) );
	EXPECT_GT( softplus( -700.0 ), 0.0 );
	EXPECT_DOUBLE_EQ( softplus_deriv( 0.0 ), 0.5 );
	EXPECT_NEAR( softplus_deriv( 40.0 ), 1.0, 1e-15 );
	EXPECT_THROW( softplus( std::numeric_limits<double>::quiet_NaN() ), std::domain_error );
}

TEST( Softplus, BoundsProperty )
{
	std::mt19937_64 rng( 23 );
	std::uniform_real_distribution<double> ys( -60.0, 60.0 );
	for( int i = 0; i < 10000; ++i ) {
		const double y = ys( rng );
		const double s = softplus( y );
		EXPECT_GT( s, 0.0 );
		EXPECT_LE( s - std::max( y, 0.0 ), std::numbers::ln2 + 1e-15 );
		const double d = softplus_deriv( y );
		EXPECT_GE( d, 0.0 );
		EXPECT_LE( d, 1.0 );
	}
}

TEST( BetaPdf, ClosedFormsAndEdges )
{
	EXPECT_NEAR( beta_pdf( 0.5, { 2.0, 2.0 } ), 1.5, 1e-14 ); // 6 x (1 - x)
	EXPECT_NEAR( beta_pdf( 0.3, { 1.0, 1.0 } ), 1.0, 1e-15 );
	EXPECT_EQ( beta_pdf( 0.0, { 2.0, 2.0 } ), 0.0 );
	EXPECT_TRUE( std::isinf( beta_pdf( 1.0, { 2.0, 0.5 } ) ) );
	EXPECT_NEAR( beta_pdf( 0.0, { 1.0, 3.0 } ), 3.0, 1e-14 );
}
