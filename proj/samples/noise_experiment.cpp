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


// Trains both heads on clean and on 10% adjacent-noise labels for a few seeds
// and prints the accuracy table.

#include <algorithm>
#include <cstdio>
#include <thread>

#include <ivbeta/toytrain.hpp>

using namespace ivbeta;

int main()
{
	TrainConfig config;
	config.seed = 1;
	const unsigned threads = std::max( 1u, std::thread::hardware_concurrency() );
	const ExperimentReport report = run_noise_experiment( config, 0.10, 5, threads );
	std::printf( "%s", report_text( report ).c_str() );
	return 0;
}
