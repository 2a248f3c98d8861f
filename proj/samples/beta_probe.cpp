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


// Prints class probabilities, the predicted class and the focal-loss gradient
// for a few raw head outputs, then the shape gradient of I_x at the cuts.

#include <cstdio>

#include <ivbeta/maturity.hpp>

using namespace ivbeta;

int main()
{
	const ThresholdSchedule thresholds = ThresholdSchedule::equal( 3 );
	const FocalConfig focal;
	const double raws[][2] = { { 0.0, 0.0 }, { 2.0, -1.0 }, { -1.0, 2.0 }, { 3.0, 3.0 }, { 5.0, 0.5 } };
	std::printf( "%8s %8s %8s %8s %8s %8s %8s  %s\n", "raw1", "raw2", "alpha", "beta", "P(U)", "P(I)", "P(R)", "class" );
	for( const auto& r : raws ) {
		const BetaParams p = link( r[0], r[1] );
		const ProbVector probs = class_probs( p, thresholds );
		std::printf( "%8.3f %8.3f %8.4f %8.4f %8.4f %8.4f %8.4f  %d\n", r[0], r[1], p.alpha, p.beta, probs.probs[0],
			probs.probs[1], probs.probs[2], predict_class( p, thresholds ) );
	}

	std::printf( "\nloss and raw-output gradient for label 2 (gamma %.1f)\n", focal.gamma );
	for( const auto& r : raws ) {
		const RawLossGrad g = loss_grad( r[0], r[1], 2, thresholds, focal );
		std::printf( "%8.3f %8.3f  loss %10.6f  d/draw1 %+10.6f  d/draw2 %+10.6f\n", r[0], r[1], g.loss, g.dRaw1, g.dRaw2 );
	}

	std::printf( "\nshape gradient of I_x(2, 5) at the interior cuts\n" );
	for( int k = 1; k < thresholds.classes(); ++k ) {
		const double x = thresholds.cut( k );
		const ShapeGradient g = grad_reg_inc_beta( x, { 2.0, 5.0 } );
		std::printf( "x=%.4f  I=%.10f  dI/dalpha=%+.10f  dI/dbeta=%+.10f\n", x, reg_inc_beta( x, { 2.0, 5.0 } ), g.dAlpha,
			g.dBeta );
	}
	return 0;
}
