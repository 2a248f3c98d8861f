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

// Probabilistic interval classification over a latent maturity m in [0, 1].
//
// A head emits two raw scalars, mapped by softplus + epsilon to Beta(alpha, beta)
// shapes. Class k covers the interval [tau_{k-1}, tau_k) of the latent axis and
// receives probability F(tau_k) - F(tau_{k-1}), F being the Beta CDF. Training
// applies a focal loss to the probability of the observed class.
//
// Class indices are 1-based in this interface.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <ivbeta/specfun.hpp>

namespace ivbeta {

inline constexpr double kDefaultEpsilon = 0.01;
inline constexpr double kProbabilityFloor = 1e-12;

/// Beta shapes predicted for one detection, with the raw pre-link outputs.
struct BetaParams {
	double raw1 = 0.0;
	double raw2 = 0.0;
	double alpha = 1.0;
	double beta = 1.0;
	double epsilon = kDefaultEpsilon;

	ShapePair shape() const { return { alpha, beta }; }
};

/// Cut points 0 = tau_0 < tau_1 < ... < tau_K = 1 quantizing the latent axis into K classes.
class ThresholdSchedule {
public:
	/// Equal partition into `classes` intervals.
	ThresholdSchedule() : ThresholdSchedule( equal( 3 ) ) {}

	explicit ThresholdSchedule( std::vector<double> cuts ) : cuts_( std::move( cuts ) )
	{
		if( cuts_.size() < 3 ) {
			throw std::invalid_argument( "threshold schedule needs at least two classes" );
		}
		if( cuts_.front() != 0.0 || cuts_.back() != 1.0 ) {
			throw std::invalid_argument( "threshold schedule must start at 0 and end at 1" );
		}
		for( std::size_t i = 1; i < cuts_.size(); ++i ) {
			if( !( cuts_[i] > cuts_[i - 1] ) ) {
				throw std::invalid_argument( "threshold schedule must be strictly increasing (cut "
					+ std::to_string( i ) + ")" );
			}
		}
	}

	static ThresholdSchedule equal( int classes )
	{
		if( classes < 2 ) {
			throw std::invalid_argument( "threshold schedule needs at least two classes" );
		}
		std::vector<double> cuts( classes + 1 );
		for( int k = 0; k <= classes; ++k ) {
			cuts[k] = static_cast<double>( k ) / classes;
		}
		cuts.back() = 1.0;
		return ThresholdSchedule( std::move( cuts ) );
	}

	/// Builds a schedule from the interior cuts only (tau_1 .. tau_{K-1}).
	static ThresholdSchedule from_interior( std::span<const double> interior )
	{
		std::vector<double> cuts;
		cuts.reserve( interior.size() + 2 );
		cuts.push_back( 0.0 );
		cuts.insert( cuts.end(), interior.begin(), interior.end() );
		cuts.push_back( 1.0 );
		return ThresholdSchedule( std::move( cuts ) );
	}

	int classes() const { return static_cast<int>( cuts_.size() ) - 1; }
	std::span<const double> cuts() const { return cuts_; }
	double cut( int k ) const { return cuts_.at( k ); }

	/// Class (1-based) of latent value m: class k covers [tau_{k-1}, tau_k), the last class includes 1.
	int quantize( double m ) const
	{
		if( !( m >= 0.0 && m <= 1.0 ) ) {
			throw std::domain_error( "latent maturity must lie in [0, 1]" );
		}
		const auto it = std::upper_bound( cuts_.begin() + 1, cuts_.end() - 1, m );
		return static_cast<int>( it - cuts_.begin() );
	}

	/// Mirror image m -> 1 - m of the schedule.
	ThresholdSchedule reversed() const
	{
		std::vector<double> cuts( cuts_.size() );
		for( std::size_t i = 0; i < cuts_.size(); ++i ) {
			cuts[i] = 1.0 - cuts_[cuts_.size() - 1 - i];
		}
		return ThresholdSchedule( std::move( cuts ) );
	}

	friend bool operator==( const ThresholdSchedule&, const ThresholdSchedule& ) = default;

private:
	std::vector<double> cuts_;
};

/// Class probabilities; entry k-1 holds P(y = k).
struct ProbVector {
	std::vector<double> probs;

	std::size_t size() const { return probs.size(); }
	double operator[]( std::size_t i ) const { return probs[i]; }
	/// 1-based access.
	double of_class( int k ) const { return probs.at( static_cast<std::size_t>( k - 1 ) ); }
};

struct FocalConfig {
	double gamma = 2.0;         // focusing parameter
	double lambda_weight = 1.0; // weight of the focal term in a composed objective

	void validate() const
	{
		if( !std::isfinite( gamma ) || gamma < 0.0 ) {
			throw std::invalid_argument( "focal gamma must be finite and non-negative" );
		}
		if( !std::isfinite( lambda_weight ) || !( lambda_weight > 0.0 ) ) {
			throw std::invalid_argument( "focal lambda weight must be finite and positive" );
		}
	}
};

inline BetaParams link( double raw1, double raw2, double epsilon = kDefaultEpsilon )
{
	if( !std::isfinite( raw1 ) || !std::isfinite( raw2 ) ) {
		throw std::domain_error( "link: raw head outputs must be finite" );
	}
	if( !std::isfinite( epsilon ) || !( epsilon > 0.0 ) ) {
		throw std::domain_error( "link: epsilon must be finite and positive" );
	}
	return { raw1, raw2, softplus( raw1 ) + epsilon, softplus( raw2 ) + epsilon, epsilon };
}

namespace detail {

// Probabilities of every class plus d p_k / d alpha and d p_k / d beta.
struct ClassProbGrad {
	std::vector<double> probs;
	std::vector<double> dAlpha;
	std::vector<double> dBeta;
};

// P(tau_{k-1} <= m < tau_k) from the CDF and its complement at both ends,
// choosing the form that avoids subtracting two numbers close to one.
inline double interval_mass( const IncBetaGrad& lo, const IncBetaGrad& hi )
{
	if( hi.value <= 0.5 ) {
		return hi.value - lo.value;
	}
	if( lo.complement <= 0.5 ) {
		return lo.complement - hi.complement;
	}
	return 1.0 - lo.value - hi.complement;
}

template<bool WithGrad>
ClassProbGrad class_probs_impl( ShapePair shape, const ThresholdSchedule& thresholds )
{
	const auto cuts = thresholds.cuts();
	const int classes = thresholds.classes();
	std::vector<IncBetaGrad> cdf( cuts.size() );
	cdf.front() = { 0.0, 1.0, 0.0, 0.0 };
	cdf.back() = { 1.0, 0.0, 0.0, 0.0 };
	for( std::size_t i = 1; i + 1 < cuts.size(); ++i ) {
		if constexpr( WithGrad ) {
			cdf[i] = inc_beta_grad( cuts[i], shape );
		} else {
			const IncBeta v = inc_beta( cuts[i], shape );
			cdf[i] = { v.value, v.complement, 0.0, 0.0 };
		}
	}
	ClassProbGrad out;
	out.probs.resize( classes );
	if constexpr( WithGrad ) {
		out.dAlpha.resize( classes );
		out.dBeta.resize( classes );
	}
	for( int k = 0; k < classes; ++k ) {
		out.probs[k] = std::clamp( interval_mass( cdf[k], cdf[k + 1] ), 0.0, 1.0 );
		if constexpr( WithGrad ) {
			out.dAlpha[k] = cdf[k + 1].dAlpha - cdf[k].dAlpha;
			out.dBeta[k] = cdf[k + 1].dBeta - cdf[k].dBeta;
		}
	}
	return out;
}

} // namespace detail

/// P(y = k) = F(tau_k) - F(tau_{k-1}) under Beta(alpha, beta).
inline ProbVector class_probs( ShapePair shape, const ThresholdSchedule& thresholds )
{
	return { detail::class_probs_impl<false>( shape, thresholds ).probs };
}

inline ProbVector class_probs( const BetaParams& params, const ThresholdSchedule& thresholds )
{
	return class_probs( params.shape(), thresholds );
}

namespace detail {

inline void require_label( int label, std::size_t classes )
{
	if( label < 1 || static_cast<std::size_t>( label ) > classes ) {
		throw std::out_of_range( "class label " + std::to_string( label ) + " outside 1.."
			+ std::to_string( classes ) );
	}
}

// 1 - p_label as the sum of the other entries (exact when p_label is close to 1).
inline double miss_mass( std::span<const double> probs, int label )
{
	double q = 0.0;
	for( std::size_t k = 0; k < probs.size(); ++k ) {
		if( static_cast<int>( k ) != label - 1 ) {
			q += probs[k];
		}
	}
	return std::min( q, 1.0 );
}

struct FocalTerm {
	double loss = 0.0;
	double dLossDp = 0.0; // zero when the probability was clamped
};

// -(1 - p)^gamma ln p and its derivative in p, given p and q = 1 - p.
inline FocalTerm focal_term( double p, double q, double gamma )
{
	if( p < kProbabilityFloor ) {
		const double pc = kProbabilityFloor;
		return { std::pow( 1.0 - pc, gamma ) * -std::log( pc ), 0.0 };
	}
	const double lnP = ( p > 0.5 ) ? std::log1p( -q ) : std::log( p );
	const double weight = ( gamma == 0.0 ) ? 1.0 : std::pow( q, gamma );
	FocalTerm t;
	t.loss = -weight * lnP;
	if( t.loss == 0.0 ) {
		t.loss = 0.0; // no negative zero
	}
	t.dLossDp = -weight / p;
	if( gamma != 0.0 && q > 0.0 ) {
		t.dLossDp += gamma * std::pow( q, gamma - 1.0 ) * lnP;
	}
	return t;
}

} // namespace detail

/// Focal loss (1 - p_y)^gamma * (-ln p_y) of the probability assigned to `label` (1-based).
/// p_y is floored at 1e-12 before the logarithm.
inline double focal_loss( const ProbVector& probs, int label, const FocalConfig& config )
{
	config.validate();
	detail::require_label( label, probs.size() );
	const double p = probs.of_class( label );
	return detail::focal_term( p, detail::miss_mass( probs.probs, label ), config.gamma ).loss;
}

/// Loss value and its gradient with respect to the raw head outputs.
struct RawLossGrad {
	double loss = 0.0;
	double dRaw1 = 0.0;
	double dRaw2 = 0.0;
};

/// Gradient of focal_loss(class_probs(link(raw1, raw2))) with respect to (raw1, raw2).
inline RawLossGrad loss_grad( double raw1, double raw2, int label, const ThresholdSchedule& thresholds,
	const FocalConfig& config, double epsilon = kDefaultEpsilon )
{
	config.validate();
	detail::require_label( label, static_cast<std::size_t>( thresholds.classes() ) );
	const BetaParams params = link( raw1, raw2, epsilon );
	const detail::ClassProbGrad cp = detail::class_probs_impl<true>( params.shape(), thresholds );
	const int k = label - 1;
	const double p = cp.probs[k];
	const detail::FocalTerm term = detail::focal_term( p, detail::miss_mass( cp.probs, label ), config.gamma );
	return { term.loss, term.dLossDp * cp.dAlpha[k] * softplus_deriv( raw1 ),
		term.dLossDp * cp.dBeta[k] * softplus_deriv( raw2 ) };
}

/// Index of the largest entry; entries within 1e-12 of the maximum count as tied
/// and the lowest such index wins. Returns a 1-based class.
inline int argmax_class( std::span<const double> probs )
{
	if( probs.empty() ) {
		throw std::invalid_argument( "argmax of an empty probability vector" );
	}
	const double best = *std::max_element( probs.begin(), probs.end() );
	for( std::size_t k = 0; k < probs.size(); ++k ) {
		if( probs[k] >= best - 1e-12 ) {
			return static_cast<int>( k ) + 1;
		}
	}
	return 1;
}

inline int predict_class( const BetaParams& params, const ThresholdSchedule& thresholds )
{
	return argmax_class( class_probs( params, thresholds ).probs );
}

inline int predict_class( ShapePair shape, const ThresholdSchedule& thresholds )
{
	return argmax_class( class_probs( shape, thresholds ).probs );
}

} // namespace ivbeta
