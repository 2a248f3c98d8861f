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

// ivbeta: command-line front end.
//
//   ivbeta beta       --alpha A --beta B [--cuts c1,c2] [--x x1,x2,...]
//   ivbeta agree      --reference FILE --target FILE [--iou 0.5]
//   ivbeta noisify    --input FILE --output FILE --seed S [--rate 0.1] [--flip-log FILE]
//   ivbeta eval       --detections FILE --ground-truth FILE
//   ivbeta train-toy  --seed S [--noise-rate 0.1] [--seeds 10] ...
//   ivbeta simulate   --seed S [--n 5000] [--jitter 0.05] [--out-dir DIR]
//   ivbeta split      --input FILE --seed S [--out-a FILE] [--out-b FILE]
//
// Exit status: 0 success, 2 invalid input, 3 runtime or experiment failure.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ivbeta/annio.hpp>
#include <ivbeta/detmetrics.hpp>
#include <ivbeta/matchagree.hpp>
#include <ivbeta/maturity.hpp>
#include <ivbeta/noise.hpp>
#include <ivbeta/specfun.hpp>
#include <ivbeta/toytrain.hpp>

namespace {

using namespace ivbeta;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

// Thrown for invalid flag combinations that CLI11 cannot detect on its own.
class UsageError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

std::string env_or( const char* name, const std::string& fallback )
{
	const char* v = std::getenv( name );
	return ( v != nullptr && *v != '\0' ) ? std::string( v ) : fallback;
}

std::string format_double( double v, int precision = 17 )
{
	std::ostringstream os;
	os << std::setprecision( precision ) << v;
	return os.str();
}

void emit( const std::string& text, const std::string& outputPath )
{
	if( outputPath.empty() || outputPath == "-" ) {
		std::cout << text;
		std::cout.flush();
	} else {
		write_text_file( outputPath, text );
	}
}

ThresholdSchedule schedule_from( const std::vector<double>& interior )
{
	return ThresholdSchedule::from_interior( interior );
}

// ---------------------------------------------------------------------------------------------------------------

struct BetaOptions {
	std::optional<double> alpha;
	std::optional<double> beta;
	std::optional<double> raw1;
	std::optional<double> raw2;
	double epsilon = kDefaultEpsilon;
	std::vector<double> cuts{ 1.0 / 3.0, 2.0 / 3.0 };
	std::vector<double> xs;
	std::string format = "text";
	std::string output;
};

int run_beta( const BetaOptions& o )
{
	ShapePair shape;
	if( o.raw1 || o.raw2 ) {
		if( !o.raw1 || !o.raw2 || o.alpha || o.beta ) {
			throw UsageError( "give either --alpha/--beta or --raw1/--raw2" );
		}
		const BetaParams p = link( *o.raw1, *o.raw2, o.epsilon );
		shape = p.shape();
	} else {
		if( !o.alpha || !o.beta ) {
			throw UsageError( "--alpha and --beta are required" );
		}
		shape = { *o.alpha, *o.beta };
	}
	const ThresholdSchedule thresholds = schedule_from( o.cuts );
	const ProbVector probs = class_probs( shape, thresholds );
	std::vector<double> pdf;
	std::vector<double> cdf;
	for( double x : o.xs ) {
		pdf.push_back( beta_pdf( x, shape ) );
		cdf.push_back( reg_inc_beta( x, shape ) );
	}
	const std::vector<std::string> names = default_class_names( thresholds.classes() );
	const double mean = shape.alpha / ( shape.alpha + shape.beta );

	std::ostringstream os;
	if( o.format == "json" ) {
		ordered_json j = ordered_json::object();
		j["alpha"] = shape.alpha;
		j["beta"] = shape.beta;
		j["mean"] = mean;
		j["cuts"] = thresholds.cuts();
		j["class_probs"] = probs.probs;
		j["predicted_class"] = argmax_class( probs.probs );
		ordered_json pts = ordered_json::array();
		for( std::size_t i = 0; i < o.xs.size(); ++i ) {
			pts.push_back( ordered_json{ { "x", o.xs[i] }, { "pdf", pdf[i] }, { "cdf", cdf[i] } } );
		}
		j["points"] = std::move( pts );
		os << j.dump( 2 ) << '\n';
	} else if( o.format == "csv" ) {
		os << "kind,key,value,extra\n";
		os << "shape,alpha," << format_double( shape.alpha ) << ",\n";
		os << "shape,beta," << format_double( shape.beta ) << ",\n";
		for( std::size_t k = 0; k < probs.size(); ++k ) {
			os << "class_prob," << names[k] << ',' << format_double( probs[k] ) << ",\n";
		}
		for( std::size_t i = 0; i < o.xs.size(); ++i ) {
			os << "point," << format_double( o.xs[i] ) << ',' << format_double( pdf[i] ) << ','
			   << format_double( cdf[i] ) << '\n';
		}
	} else {
		os << std::setprecision( 6 );
		os << "Beta(alpha=" << shape.alpha << ", beta=" << shape.beta << ")  mean=" << mean << '\n';
		os << "cuts:";
		for( double c : thresholds.cuts() ) {
			os << ' ' << c;
		}
		os << '\n';
		for( std::size_t k = 0; k < probs.size(); ++k ) {
			os << "  p(" << names[k] << ") = " << std::fixed << std::setprecision( 6 ) << probs[k] << '\n'
			   << std::defaultfloat;
		}
		os << "predicted: " << names[static_cast<std::size_t>( argmax_class( probs.probs ) - 1 )] << '\n';
		for( std::size_t i = 0; i < o.xs.size(); ++i ) {
			os << "  x=" << o.xs[i] << "  pdf=" << pdf[i] << "  cdf=" << cdf[i] << '\n';
		}
	}
	emit( os.str(), o.output );
	return kExitOk;
}

// ---------------------------------------------------------------------------------------------------------------

struct AgreeOptions {
	std::string reference;
	std::string target;
	double iou = kDefaultMatchIou;
	std::vector<std::int64_t> classOrder;
	std::string format = "text";
	std::string output;
};

int run_agree( const AgreeOptions& o )
{
	if( !( o.iou > 0.0 && o.iou <= 1.0 ) ) {
		throw UsageError( "--iou must lie in (0, 1]" );
	}
	const ParseOptions parse{ o.classOrder };
	const AnnotationFile refFile = load_annotations( o.reference, parse );
	const AnnotationFile tgtFile = load_annotations( o.target, parse );
	if( refFile.num_classes() != tgtFile.num_classes() ) {
		throw FormatError( "reference and target disagree on the number of categories" );
	}
	const AnnotationSet ref = to_annotation_set( refFile, o.reference );
	const AnnotationSet tgt = to_annotation_set( tgtFile, o.target );
	bool shared = false;
	for( const auto& [id, _] : ref.images ) {
		shared = shared || tgt.find( id ) != nullptr;
	}
	if( !shared ) {
		std::cerr << "warning: reference and target share no image ids; the confusion matrix is empty\n";
	}
	const MatchResult matches = match_sets( ref, tgt, o.iou );
	const ConfusionMatrix m = confusion( matches, ref, tgt );
	const std::vector<std::string> names = refFile.class_names();

	std::ostringstream os;
	if( o.format == "json" ) {
		ordered_json j = ordered_json::object();
		j["reference"] = o.reference;
		j["target"] = o.target;
		j["iou_threshold"] = o.iou;
		j["classes"] = names;
		j["matched_pairs"] = matches.pair_count();
		j["unmatched_reference"] = matches.unmatched_a_count();
		j["unmatched_target"] = matches.unmatched_b_count();
		j["counts"] = m.counts;
		j["percent"] = m.percent;
		os << j.dump( 2 ) << '\n';
	} else if( o.format == "csv" ) {
		os << format_confusion_csv( m, "reference_vs_target", names );
	} else {
		os << format_confusion_text( m, o.reference, o.target, names );
		os << "matched pairs: " << matches.pair_count() << "   unmatched reference: " << matches.unmatched_a_count()
		   << "   unmatched target: " << matches.unmatched_b_count() << "   (IoU >= " << o.iou << ")\n";
	}
	emit( os.str(), o.output );
	return kExitOk;
}

// ---------------------------------------------------------------------------------------------------------------

struct NoisifyOptions {
	std::string input;
	std::string output;
	std::string flipLog;
	double rate = 0.10;
	std::uint64_t seed = 0;
	bool perClass = false;
};

int run_noisify( const NoisifyOptions& o )
{
	const AnnotationFile file = load_annotations( o.input );
	const AnnotationSet set = to_annotation_set( file, o.input );
	const NoisyAnnotations noisy = inject_noise( set, { o.rate, o.seed, o.perClass } );
	write_text_file( o.output, serialize_annotations( with_labels( file, noisy.annotations ) ) );
	if( !o.flipLog.empty() ) {
		write_text_file( o.flipLog, format_flip_log_csv( noisy.flips ) );
	}
	std::cerr << "flipped " << noisy.flips.size() << " of " << set.instance_count() << " labels\n";
	return kExitOk;
}

// ---------------------------------------------------------------------------------------------------------------

struct EvalOptions {
	std::string detections;
	std::string groundTruth;
	std::size_t maxDets = kDefaultMaxDetections;
	std::string model = "detections";
	std::string format = "text";
	std::string output;
};

int run_eval( const EvalOptions& o )
{
	const AnnotationFile gtFile = load_annotations( o.groundTruth );
	const AnnotationFile dtFile = load_annotations( o.detections, { gtFile.classOrder } );
	const AnnotationSet gts = to_annotation_set( gtFile, o.groundTruth );
	const auto dets = detections_from( to_annotation_set( dtFile, o.detections ) );
	const EvalResult r = evaluate( dets, gts, o.maxDets );
	const std::vector<std::string> names = gtFile.class_names();

	std::ostringstream os;
	if( o.format == "json" ) {
		ordered_json j = ordered_json::object();
		j["model"] = o.model;
		j["map50"] = r.map50;
		j["map75"] = r.map75;
		j["map50_95"] = r.map50_95;
		j["ar100"] = r.ar100;
		j["iou_thresholds"] = r.iouThresholds;
		ordered_json classes = ordered_json::array();
		for( std::size_t c = 0; c < r.classes.size(); ++c ) {
			ordered_json e = ordered_json::object();
			e["class"] = names[static_cast<std::size_t>( r.classes[c] - 1 )];
			e["ap"] = r.ap[c];
			e["recall"] = r.recall[c];
			classes.push_back( std::move( e ) );
		}
		j["per_class"] = std::move( classes );
		os << j.dump( 2 ) << '\n';
	} else if( o.format == "csv" ) {
		os << "model,class,iou_threshold,ap,recall\n";
		for( std::size_t c = 0; c < r.classes.size(); ++c ) {
			for( std::size_t t = 0; t < r.iouThresholds.size(); ++t ) {
				os << o.model << ',' << names[static_cast<std::size_t>( r.classes[c] - 1 )] << ','
				   << format_double( r.iouThresholds[t], 6 ) << ',' << format_double( r.ap[c][t] ) << ','
				   << format_double( r.recall[c][t] ) << '\n';
			}
		}
	} else {
		os << format_eval_text( r, o.model, names );
	}
	emit( os.str(), o.output );
	return kExitOk;
}

// ---------------------------------------------------------------------------------------------------------------

struct TrainOptions {
	TrainConfig config;
	std::vector<double> cuts{ 1.0 / 3.0, 2.0 / 3.0 };
	double noiseRate = 0.10;
	std::size_t seeds = 10;
	unsigned threads = 0;
	std::string datasetCsv;
	std::string format = "text";
	std::string output;
};

int run_train_toy( TrainOptions o )
{
	o.config.thresholds = schedule_from( o.cuts );
	const unsigned threads = o.threads == 0 ? std::max( 1u, std::thread::hardware_concurrency() ) : o.threads;
	const ExperimentReport report = run_noise_experiment( o.config, o.noiseRate, o.seeds, threads );
	if( !o.datasetCsv.empty() ) {
		// Noisy training split of the first seed, as it was used for training.
		DataSplits splits = make_splits( o.config );
		noisify_dataset( splits.train, o.config.thresholds.classes(), o.noiseRate,
			make_rng( o.config.seed, stream::kNoise )() );
		write_text_file( o.datasetCsv, dataset_csv( splits.train ) );
	}
	std::ostringstream os;
	if( o.format == "json" ) {
		os << report_json( report );
	} else if( o.format == "csv" ) {
		os << "head,seed,clean_accuracy,noisy_accuracy,abs_drop\n";
		for( const HeadSummary* h : { &report.beta, &report.softmax } ) {
			for( const SeedOutcome& s : h->perSeed ) {
				os << head_name( h->kind ) << ',' << s.seed << ',' << format_double( s.clean ) << ','
				   << format_double( s.noisy ) << ',' << format_double( s.drop() ) << '\n';
			}
		}
	} else {
		os << report_text( report );
		const auto names = default_class_names( o.config.thresholds.classes() );
		for( const HeadSummary* h : { &report.beta, &report.softmax } ) {
			os << '\n' << head_name( h->kind ) << " head, clean training labels\n"
			   << format_confusion_text( h->cleanConfusion, "truth", "predicted", names );
			os << head_name( h->kind ) << " head, noisy training labels\n"
			   << format_confusion_text( h->noisyConfusion, "truth", "predicted", names );
		}
	}
	emit( os.str(), o.output );
	return kExitOk;
}

// ---------------------------------------------------------------------------------------------------------------

struct SimulateOptions {
	std::size_t n = 5000;
	double jitter = 0.05;
	std::uint64_t seed = 0;
	std::vector<double> cuts{ 1.0 / 3.0, 2.0 / 3.0 };
	std::string outDir;
	double iou = kDefaultMatchIou;
	std::string format = "text";
	std::string output;
};

int run_simulate( const SimulateOptions& o )
{
	const ThresholdSchedule thresholds = schedule_from( o.cuts );
	const SimulatedAnnotations sim = simulate_annotators( o.n, thresholds, o.jitter, o.seed );
	const auto names = default_class_names( thresholds.classes() );
	const auto w = static_cast<std::int64_t>( kSimImageWidth );
	const auto h = static_cast<std::int64_t>( kSimImageHeight );
	const std::filesystem::path dir = o.outDir.empty() ? env_or( "IVBETA_OUT_DIR", "." ) : o.outDir;
	std::filesystem::create_directories( dir );
	write_text_file( ( dir / "baseline.json" ).string(),
		serialize_annotations( from_annotation_set( sim.baseline, names, w, h ) ) );
	write_text_file( ( dir / "annotator_a.json" ).string(),
		serialize_annotations( from_annotation_set( sim.annotator1, names, w, h ) ) );
	write_text_file( ( dir / "annotator_b.json" ).string(),
		serialize_annotations( from_annotation_set( sim.annotator2, names, w, h ) ) );

	struct Comparison {
		std::string name;
		std::string reference;
		std::string target;
		const AnnotationSet* a;
		const AnnotationSet* b;
	};
	const std::vector<Comparison> comparisons{
		{ "annotator_a_vs_annotator_b", "Annotator A", "Annotator B", &sim.annotator1, &sim.annotator2 },
		{ "baseline_vs_annotator_a", "Baseline", "Annotator A", &sim.baseline, &sim.annotator1 },
		{ "baseline_vs_annotator_b", "Baseline", "Annotator B", &sim.baseline, &sim.annotator2 } };

	std::ostringstream os;
	ordered_json j = ordered_json::object();
	if( o.format == "json" ) {
		j["n"] = o.n;
		j["jitter"] = o.jitter;
		j["seed"] = o.seed;
		j["comparisons"] = ordered_json::array();
	} else if( o.format == "csv" ) {
		os << "comparison,reference_class";
		for( const auto& n : names ) {
			os << ',' << n << "_pct";
		}
		for( const auto& n : names ) {
			os << ',' << n << "_count";
		}
		os << ",empty_row\n";
	}
	for( const Comparison& c : comparisons ) {
		const ConfusionMatrix m = confusion( match_sets( *c.a, *c.b, o.iou ), *c.a, *c.b );
		if( o.format == "json" ) {
			ordered_json e = ordered_json::object();
			e["comparison"] = c.name;
			e["counts"] = m.counts;
			e["percent"] = m.percent;
			j["comparisons"].push_back( std::move( e ) );
		} else if( o.format == "csv" ) {
			const std::string csv = format_confusion_csv( m, c.name, names );
			os << csv.substr( csv.find( '\n' ) + 1 );
		} else {
			os << format_confusion_text( m, c.reference, c.target, names ) << '\n';
		}
	}
	if( o.format == "json" ) {
		os << j.dump( 2 ) << '\n';
	}
	emit( os.str(), o.output );
	return kExitOk;
}

// ---------------------------------------------------------------------------------------------------------------

struct SplitOptions {
	std::string input;
	std::string outA;
	std::string outB;
	std::uint64_t seed = 0;
	double fraction = 0.5;
};

// Seeded partition of the image list; each annotation follows its image.
int run_split( const SplitOptions& o )
{
	if( !( o.fraction > 0.0 && o.fraction < 1.0 ) ) {
		throw UsageError( "--fraction must lie in (0, 1)" );
	}
	const AnnotationFile file = load_annotations( o.input );
	std::vector<ImageId> ids;
	for( const auto& im : file.images ) {
		ids.push_back( im.id );
	}
	std::sort( ids.begin(), ids.end() );
	std::mt19937_64 rng( o.seed );
	std::shuffle( ids.begin(), ids.end(), rng );
	const auto cut = static_cast<std::size_t>( std::llround( o.fraction * static_cast<double>( ids.size() ) ) );
	const std::set<ImageId> first( ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>( cut ) );

	AnnotationFile a = file;
	AnnotationFile b = file;
	a.images.clear();
	b.images.clear();
	a.annotations.clear();
	b.annotations.clear();
	for( const auto& im : file.images ) {
		( first.count( im.id ) ? a : b ).images.push_back( im );
	}
	for( const auto& ann : file.annotations ) {
		( first.count( ann.imageId ) ? a : b ).annotations.push_back( ann );
	}
	const std::filesystem::path dir = env_or( "IVBETA_OUT_DIR", "." );
	const std::string outA = o.outA.empty() ? ( dir / "split_a.json" ).string() : o.outA;
	const std::string outB = o.outB.empty() ? ( dir / "split_b.json" ).string() : o.outB;
	write_text_file( outA, serialize_annotations( a ) );
	write_text_file( outB, serialize_annotations( b ) );
	std::cerr << "split " << ids.size() << " images into " << a.images.size() << " and " << b.images.size() << '\n';
	return kExitOk;
}

void add_format( CLI::App* cmd, std::string& format, std::string& output )
{
	cmd->add_option( "--format", format, "Output format" )
		->check( CLI::IsMember( { "text", "json", "csv" } ) )
		->capture_default_str();
	cmd->add_option( "-o,--output", output, "Write the report to this file instead of standard output" );
}

} // namespace

int main( int argc, char** argv )
{
	CLI::App app{ "Beta-distribution maturity heads, annotation agreement and label-noise experiments" };
	app.require_subcommand( 1 );

	BetaOptions beta;
	auto* cmdBeta = app.add_subcommand( "beta", "Class probabilities and CDF values of a Beta distribution" );
	cmdBeta->add_option( "--alpha", beta.alpha, "Shape alpha (> 0)" );
	cmdBeta->add_option( "--beta", beta.beta, "Shape beta (> 0)" );
	cmdBeta->add_option( "--raw1", beta.raw1, "Raw head output mapped to alpha through softplus" );
	cmdBeta->add_option( "--raw2", beta.raw2, "Raw head output mapped to beta through softplus" );
	cmdBeta->add_option( "--epsilon", beta.epsilon, "Offset added after softplus" )->capture_default_str();
	cmdBeta->add_option( "--cuts", beta.cuts, "Interior thresholds, comma separated" )->delimiter( ',' );
	cmdBeta->add_option( "--x", beta.xs, "Points at which to report density and CDF" )->delimiter( ',' );
	add_format( cmdBeta, beta.format, beta.output );

	AgreeOptions agree;
	auto* cmdAgree = app.add_subcommand( "agree", "Matched-pair confusion matrix between two annotation files" );
	cmdAgree->add_option( "--reference", agree.reference, "Reference annotation file (rows)" )->required();
	cmdAgree->add_option( "--target", agree.target, "Target annotation file (columns)" )->required();
	cmdAgree->add_option( "--iou", agree.iou, "Minimum IoU of a retained pair" )->capture_default_str();
	cmdAgree->add_option( "--class-order", agree.classOrder, "Category ids of classes 1..K" )->delimiter( ',' );
	add_format( cmdAgree, agree.format, agree.output );

	NoisifyOptions noisify;
	auto* cmdNoisify = app.add_subcommand( "noisify", "Inject adjacent-class label noise into an annotation file" );
	cmdNoisify->add_option( "--input", noisify.input, "Input annotation file" )->required();
	cmdNoisify->add_option( "--output", noisify.output, "Output annotation file" )->required();
	cmdNoisify->add_option( "--rate", noisify.rate, "Fraction of labels to flip" )->capture_default_str();
	cmdNoisify->add_option( "--seed", noisify.seed, "Random seed" )->required();
	cmdNoisify->add_flag( "--per-class", noisify.perClass, "Flip the rate within every class" );
	cmdNoisify->add_option( "--flip-log", noisify.flipLog, "CSV log of every flipped label" );

	EvalOptions eval;
	auto* cmdEval = app.add_subcommand( "eval", "COCO-style mAP50, mAP50-95 and AR@100" );
	cmdEval->add_option( "--detections", eval.detections, "Detection file (annotations with scores)" )->required();
	cmdEval->add_option( "--ground-truth", eval.groundTruth, "Ground-truth annotation file" )->required();
	cmdEval->add_option( "--max-dets", eval.maxDets, "Detections kept per image and class" )->capture_default_str();
	cmdEval->add_option( "--model", eval.model, "Model name in the report" );
	add_format( cmdEval, eval.format, eval.output );

	TrainOptions train;
	auto* cmdTrain = app.add_subcommand( "train-toy", "Clean vs noisy training of the Beta and softmax heads" );
	cmdTrain->add_option( "--seed", train.config.seed, "Base random seed" )->required();
	cmdTrain->add_option( "--noise-rate", train.noiseRate, "Training label noise rate" )->capture_default_str();
	cmdTrain->add_option( "--seeds", train.seeds, "Number of seeds" )->capture_default_str();
	cmdTrain->add_option( "--epochs", train.config.epochs, "Training epochs" )->capture_default_str();
	cmdTrain->add_option( "--batch-size", train.config.batchSize, "Mini-batch size" )->capture_default_str();
	cmdTrain->add_option( "--lr", train.config.learningRate, "Learning rate" )->capture_default_str();
	cmdTrain->add_option( "--hidden", train.config.hiddenDims, "Hidden layer widths" )->delimiter( ',' );
	cmdTrain->add_option( "--gamma", train.config.focal.gamma, "Focal focusing parameter" )->capture_default_str();
	cmdTrain->add_option( "--lambda", train.config.focal.lambda_weight, "Loss weight" )->capture_default_str();
	cmdTrain->add_option( "--cuts", train.cuts, "Interior thresholds" )->delimiter( ',' );
	cmdTrain->add_option( "--feature-noise", train.config.featureNoiseSigma, "Gaussian noise on the informative feature" )
		->capture_default_str();
	cmdTrain->add_option( "--distractors", train.config.distractorDims, "Pure-noise feature dimensions" )
		->capture_default_str();
	cmdTrain->add_option( "--n-train", train.config.nTrain, "Training samples" )->capture_default_str();
	cmdTrain->add_option( "--n-val", train.config.nVal, "Validation samples" )->capture_default_str();
	cmdTrain->add_option( "--n-test", train.config.nTest, "Test samples" )->capture_default_str();
	cmdTrain->add_option( "--threads", train.threads, "Worker threads (0 = all cores)" )->capture_default_str();
	cmdTrain->add_option( "--dataset-csv", train.datasetCsv, "Write the first seed's noisy training set as CSV" );
	add_format( cmdTrain, train.format, train.output );

	SimulateOptions sim;
	auto* cmdSim = app.add_subcommand( "simulate", "Two simulated annotators with jittered thresholds" );
	cmdSim->add_option( "--seed", sim.seed, "Random seed" )->required();
	cmdSim->add_option( "--n", sim.n, "Number of fruits" )->capture_default_str();
	cmdSim->add_option( "--jitter", sim.jitter, "Standard deviation of the threshold jitter" )->capture_default_str();
	cmdSim->add_option( "--cuts", sim.cuts, "Interior thresholds" )->delimiter( ',' );
	cmdSim->add_option( "--iou", sim.iou, "Minimum IoU of a retained pair" )->capture_default_str();
	cmdSim->add_option( "--out-dir", sim.outDir, "Directory for the three annotation files (default $IVBETA_OUT_DIR or .)" );
	add_format( cmdSim, sim.format, sim.output );

	SplitOptions split;
	auto* cmdSplit = app.add_subcommand( "split", "Seeded split of an annotation file by image" );
	cmdSplit->add_option( "--input", split.input, "Input annotation file" )->required();
	cmdSplit->add_option( "--seed", split.seed, "Random seed" )->required();
	cmdSplit->add_option( "--fraction", split.fraction, "Fraction of images in the first part" )->capture_default_str();
	cmdSplit->add_option( "--out-a", split.outA, "First part (default $IVBETA_OUT_DIR/split_a.json)" );
	cmdSplit->add_option( "--out-b", split.outB, "Second part (default $IVBETA_OUT_DIR/split_b.json)" );

	try {
		app.parse( argc, argv );
	} catch( const CLI::CallForHelp& e ) {
		return app.exit( e );
	} catch( const CLI::CallForAllHelp& e ) {
		return app.exit( e );
	} catch( const CLI::ParseError& e ) {
		app.exit( e, std::cerr, std::cerr );
		return kExitInput;
	}

	try {
		if( cmdBeta->parsed() ) {
			return run_beta( beta );
		}
		if( cmdAgree->parsed() ) {
			return run_agree( agree );
		}
		if( cmdNoisify->parsed() ) {
			return run_noisify( noisify );
		}
		if( cmdEval->parsed() ) {
			return run_eval( eval );
		}
		if( cmdTrain->parsed() ) {
			return run_train_toy( train );
		}
		if( cmdSim->parsed() ) {
			return run_simulate( sim );
		}
		if( cmdSplit->parsed() ) {
			return run_split( split );
		}
	} catch( const DivergenceError& e ) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitRuntime;
	} catch( const FormatError& e ) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitInput;
	} catch( const std::invalid_argument& e ) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitInput;
	} catch( const std::domain_error& e ) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitInput;
	} catch( const std::out_of_range& e ) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitInput;
	} catch( const std::exception& e ) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitRuntime;
	}
	return kExitInput;
}
