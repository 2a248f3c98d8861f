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


// Simulates a baseline labelling and two annotators with jittered class cuts,
// then prints the three pairwise agreement matrices.

#include <cstdio>
#include <cstdlib>

#include <ivbeta/matchagree.hpp>

using namespace ivbeta;

int main( int argc, char** argv )
{
	const double jitter = argc > 1 ? std::atof( argv[1] ) : 0.05;
	const SimulatedAnnotations sim = simulate_annotators( 3000, ThresholdSchedule::equal( 3 ), jitter, 2026 );
	const struct {
		const AnnotationSet* reference;
		const AnnotationSet* target;
		const char* referenceName;
		const char* targetName;
	} pairs[] = { { &sim.baseline, &sim.annotator1, "Baseline", "Annotator 1" },
		{ &sim.baseline, &sim.annotator2, "Baseline", "Annotator 2" },
		{ &sim.annotator1, &sim.annotator2, "Annotator 1", "Annotator 2" } };
	for( const auto& p : pairs ) {
		const MatchResult matches = match_sets( *p.reference, *p.target );
		const ConfusionMatrix m = confusion( matches, *p.reference, *p.target );
		std::printf( "%s\n", format_confusion_text( m, p.referenceName, p.targetName ).c_str() );
	}
	return 0;
}
