// Command-line front end: problem generation, sampling, SPVAR/ISPVAR
// reductions, the benchmark protocol, threshold sweeps, and the figure tables.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spvar/bench.hpp"
#include "spvar/embedding.hpp"
#include "spvar/generators.hpp"
#include "spvar/ispvar.hpp"
#include "spvar/json_io.hpp"

namespace {

using namespace spvar;

HardwareGraph parse_chimera(const std::string& text, double dead_fraction, std::uint64_t seed) {
    int m = 0, n = 0, t = 0;
    char comma1 = 0, comma2 = 0;
    std::istringstream in(text);
    if (!(in >> m >> comma1 >> n >> comma2 >> t) || comma1 != ',' || comma2 != ',')
        throw CLI::ValidationError("--chimera expects m,n,t");
    return chimera_graph(m, n, t, dead_fraction, seed);
}

std::vector<IsingProblem> load_problems(const std::string& path) {
    std::vector<IsingProblem> out;
    namespace fs = std::filesystem;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.path().extension() == ".json" && entry.path().filename() != "manifest.json")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) out.push_back(problem_from_json(read_json_file(file.string())));
    } else {
        out.push_back(problem_from_json(read_json_file(path)));
    }
    if (out.empty()) throw CLI::ValidationError("no problem files found under " + path);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

struct SamplerOptions {
    std::string kind = "sa";
    int reads = 1000;
    int sweeps = 1000;
    std::uint64_t seed = 1;
    std::string external;

    void attach(CLI::App* cmd) {
        cmd->add_option("--sampler", kind, "sa | tabu | exact | file")->capture_default_str();
        cmd->add_option("--reads", reads)->capture_default_str();
        cmd->add_option("--sweeps", sweeps)->capture_default_str();
        cmd->add_option("--seed", seed)->capture_default_str();
        cmd->add_option("--sample-file", external, "Sample JSON for --sampler file");
    }
    SamplerConfig config() const {
        SamplerConfig out;
        out.kind = sampler_kind_from_string(kind);
        out.reads = reads;
        out.sweeps = sweeps;
        out.seed = seed;
        out.external_path = external;
        return out;
    }
};

nlohmann::json ispvar_report_json(const IspvarOutcome& outcome, const IsingProblem& problem,
                                  bool timings) {
    nlohmann::json steps = nlohmann::json::array();
    for (const StepReport& step : outcome.reports)
        steps.push_back({{"step", step.step},
                         {"fixed_method", step.fixed_method},
                         {"fixed_preprocess", step.fixed_preprocess},
                         {"remaining", step.remaining},
                         {"elapsed_seconds", timings ? step.elapsed_seconds : 0.0}});
    return {{"problem_sha", problem_sha(problem)},
            {"assignment", assignment_to_json(outcome.assignment)},
            {"reduced", problem_to_json(outcome.reduced)},
            {"steps", steps}};
}

int run(int argc, char** argv) {
    CLI::App app{"Sample-persistence variable reduction for Ising/QUBO problems"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "Generate a random problem set");
    std::string gen_chimera = "4,4,4", gen_couplers = "U_5", gen_biases = "U_5", gen_out = ".";
    int gen_count = 1;
    std::uint64_t gen_seed = 7;
    double gen_dead = 0.0;
    gen->add_option("--chimera", gen_chimera, "m,n,t")->capture_default_str();
    gen->add_option("--dead-fraction", gen_dead)->capture_default_str();
    gen->add_option("--couplers", gen_couplers)->capture_default_str();
    gen->add_option("--biases", gen_biases, "named set or '{0}'")->capture_default_str();
    gen->add_option("--count", gen_count)->capture_default_str();
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--out", gen_out, "output directory")->capture_default_str();

    // ---- sample ----
    auto* smp = app.add_subcommand("sample", "Draw a multi-gauge sample from a problem");
    std::string smp_problem, smp_out = "sample.json";
    int smp_gauges = 1;
    SamplerOptions smp_sampler;
    smp->add_option("--problem", smp_problem)->required();
    smp_sampler.attach(smp);
    smp->add_option("--gauges", smp_gauges)->capture_default_str();
    smp->add_option("--out", smp_out)->capture_default_str();

    // ---- spvar ----
    auto* spv = app.add_subcommand("spvar", "Single-pass sample-persistence reduction");
    std::string spv_problem, spv_out = "outcome.json";
    double spv_elite = 0.3, spv_fixing = 1.0;
    int spv_gauges = 5;
    SamplerOptions spv_sampler;
    spv->add_option("--problem", spv_problem)->required();
    spv_sampler.attach(spv);
    spv->add_option("--elite", spv_elite)->capture_default_str();
    spv->add_option("--fixing", spv_fixing)->capture_default_str();
    spv->add_option("--gauges", spv_gauges)->capture_default_str();
    spv->add_option("--out", spv_out)->capture_default_str();

    // ---- ispvar ----
    auto* isp = app.add_subcommand("ispvar", "Iterative reduction with pre-processing");
    std::string isp_problem, isp_report = "report.json";
    std::vector<double> isp_elite = {0.3, 0.2, 0.15, 0.1};
    std::vector<double> isp_fixing = {1.0, 1.0, 1.0, 1.0};
    int isp_steps = 4, isp_gauges = 5;
    double isp_corr = 1.0, isp_corr_elite = 0.4;
    std::string isp_preprocess = "on", isp_zero_bias = "auto", isp_order = "spvar-first";
    bool isp_timings = false;
    SamplerOptions isp_sampler;
    isp->add_option("--problem", isp_problem)->required();
    isp_sampler.attach(isp);
    isp->add_option("--steps", isp_steps)->capture_default_str();
    isp->add_option("--elite", isp_elite)->delimiter(',')->capture_default_str();
    isp->add_option("--fixing", isp_fixing)->delimiter(',')->capture_default_str();
    isp->add_option("--corr-threshold", isp_corr)->capture_default_str();
    isp->add_option("--corr-elite", isp_corr_elite)->capture_default_str();
    isp->add_option("--preprocess", isp_preprocess, "on | off")->capture_default_str();
    isp->add_option("--zero-bias", isp_zero_bias, "auto | on | off")->capture_default_str();
    isp->add_option("--order", isp_order, "spvar-first | preprocess-first")->capture_default_str();
    isp->add_option("--gauges", isp_gauges)->capture_default_str();
    isp->add_flag("--timings", isp_timings, "include wall-clock timings in the report");
    isp->add_option("--report", isp_report)->capture_default_str();

    // ---- bench ----
    auto* ben = app.add_subcommand("bench", "Baseline vs. iterative-reduction benchmark");
    std::string ben_problems, ben_json = "report.json", ben_csv;
    int ben_baseline_reads = 3200, ben_gauges = 5, ben_steps = 4, ben_step_reads = 160;
    int ben_final_reads = 640, ben_threads = 1, ben_sweeps = 100;
    std::uint64_t ben_seed = 1;
    bool ben_timings = false, ben_no_method = false;
    ben->add_option("--problems", ben_problems, "problem file or directory")->required();
    ben->add_option("--baseline-reads", ben_baseline_reads)->capture_default_str();
    ben->add_option("--gauges", ben_gauges)->capture_default_str();
    ben->add_option("--steps", ben_steps)->capture_default_str();
    ben->add_option("--step-reads", ben_step_reads)->capture_default_str();
    ben->add_option("--final-reads", ben_final_reads)->capture_default_str();
    ben->add_option("--sweeps", ben_sweeps)->capture_default_str();
    ben->add_option("--seed", ben_seed)->capture_default_str();
    ben->add_option("--threads", ben_threads)->capture_default_str();
    ben->add_flag("--no-method", ben_no_method, "baseline columns only");
    ben->add_flag("--timings", ben_timings, "include wall-clock timings in outputs");
    ben->add_option("--out-json", ben_json)->capture_default_str();
    ben->add_option("--out-csv", ben_csv);

    // ---- sweep ----
    auto* swp = app.add_subcommand("sweep", "Fixing/elite threshold grid");
    std::string swp_problems, swp_out = "sweep.csv";
    std::vector<double> swp_fixing = {1.0, 0.95, 0.9, 0.85, 0.8};
    std::vector<double> swp_elite = {0.5, 0.4, 0.3, 0.2, 0.1};
    bool swp_success = false;
    SamplerOptions swp_sampler;
    swp->add_option("--problems", swp_problems)->required();
    swp_sampler.attach(swp);
    swp->add_option("--fixing", swp_fixing)->delimiter(',')->capture_default_str();
    swp->add_option("--elite", swp_elite)->delimiter(',')->capture_default_str();
    swp->add_flag("--with-success", swp_success, "also verify optimum preservation per cell");
    swp->add_option("--out", swp_out)->capture_default_str();

    // ---- autotune ----
    auto* aut = app.add_subcommand("autotune", "Tune elite_threshold to a fixed-fraction band");
    std::string aut_problem;
    double aut_low = 0.30, aut_high = 0.40;
    SamplerOptions aut_sampler;
    aut->add_option("--problem", aut_problem)->required();
    aut_sampler.attach(aut);
    aut->add_option("--band-low", aut_low)->capture_default_str();
    aut->add_option("--band-high", aut_high)->capture_default_str();

    // ---- fig1 ----
    auto* f1 = app.add_subcommand("fig1", "Fixed count vs. bias range table");
    std::string f1_chimera = "4,4,4", f1_out = "fig1.csv";
    int f1_nmax = 10, f1_count = 10;
    SamplerOptions f1_sampler;
    f1->add_option("--chimera", f1_chimera)->capture_default_str();
    f1->add_option("--nmax", f1_nmax)->capture_default_str();
    f1->add_option("--count", f1_count, "instances per n")->capture_default_str();
    f1_sampler.attach(f1);
    f1->add_option("--out", f1_out)->capture_default_str();

    // ---- fig2 ----
    auto* f2 = app.add_subcommand("fig2", "Correlation vs. shortest-path distance table");
    std::string f2_problem, f2_out = "fig2.csv";
    int f2_gauges = 1;
    SamplerOptions f2_sampler;
    f2->add_option("--problem", f2_problem, "a zero-bias problem")->required();
    f2_sampler.attach(f2);
    f2->add_option("--gauges", f2_gauges)->capture_default_str();
    f2->add_option("--out", f2_out)->capture_default_str();

    // ---- components ----
    auto* cmp = app.add_subcommand("components", "Connected-component size histogram");
    std::string cmp_problems, cmp_out = "components.csv";
    cmp->add_option("--problems", cmp_problems)->required();
    cmp->add_option("--out", cmp_out)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        HardwareGraph graph = parse_chimera(gen_chimera, gen_dead, gen_seed);
        ProblemSetSpec spec;
        spec.graph = graph;
        spec.couplers = named_set(gen_couplers);
        spec.biases = named_set(gen_biases);
        spec.count = gen_count;
        spec.base_seed = gen_seed;
        std::filesystem::create_directories(gen_out);
        nlohmann::json manifest = {{"chimera", gen_chimera},
                                   {"dead_fraction", gen_dead},
                                   {"couplers", spec.couplers.name},
                                   {"biases", spec.biases.name},
                                   {"count", gen_count},
                                   {"seed", gen_seed},
                                   {"files", nlohmann::json::array()}};
        for (int i = 0; i < gen_count; ++i) {
            IsingProblem problem = instance(spec, i);
            char name[32];
            std::snprintf(name, sizeof(name), "problem_%04d.json", i);
            write_json_file(gen_out + "/" + name, problem_to_json(problem));
            manifest["files"].push_back({{"file", name}, {"sha", problem_sha(problem)}});
        }
        write_json_file(gen_out + "/manifest.json", manifest);
        std::cout << "wrote " << gen_count << " problems to " << gen_out << "\n";
    } else if (smp->parsed()) {
        IsingProblem problem = problem_from_json(read_json_file(smp_problem));
        SampleSet samples = sample_multigauge(problem, smp_sampler.config(), smp_gauges);
        write_json_file(smp_out, sample_to_json(samples, problem));
        std::cout << "best energy " << samples.best().energy << " over " << samples.size()
                  << " reads\n";
    } else if (spv->parsed()) {
        IsingProblem problem = problem_from_json(read_json_file(spv_problem));
        SpvarParams params;
        params.sample_size = spv_sampler.reads;
        params.elite_threshold = spv_elite;
        params.fixing_threshold = spv_fixing;
        params.num_gauges = spv_gauges;
        SpvarOutcome outcome = spvar::spvar(problem, spv_sampler.config(), params);
        write_json_file(spv_out, {{"problem_sha", problem_sha(problem)},
                                  {"assignment", assignment_to_json(outcome.assignment)},
                                  {"reduced", problem_to_json(outcome.reduced)},
                                  {"elite_size", outcome.elite_size}});
        std::cout << "fixed " << outcome.assignment.size() << " of " << problem.num_variables()
                  << " variables\n";
    } else if (isp->parsed()) {
        IsingProblem problem = problem_from_json(read_json_file(isp_problem));
        IspvarParams params;
        params.num_steps = isp_steps;
        params.elite_thresholds = isp_elite;
        params.fixing_thresholds = isp_fixing;
        params.correlation_threshold = isp_corr;
        params.correlation_elite_threshold = isp_corr_elite;
        params.enable_preprocess = isp_preprocess == "on";
        params.zero_bias_mode = isp_zero_bias == "on"    ? ZeroBiasMode::On
                                : isp_zero_bias == "off" ? ZeroBiasMode::Off
                                                         : ZeroBiasMode::Auto;
        params.step_order =
            isp_order == "preprocess-first" ? StepOrder::PreprocessFirst : StepOrder::SpvarFirst;
        params.sample_size = isp_sampler.reads;
        params.num_gauges = isp_gauges;
        IspvarOutcome outcome = ispvar(problem, isp_sampler.config(), params);
        write_json_file(isp_report, ispvar_report_json(outcome, problem, isp_timings));
        std::cout << "fixed " << outcome.assignment.size() << " of " << problem.num_variables()
                  << " variables over " << outcome.reports.size() << " steps\n";
    } else if (ben->parsed()) {
        std::vector<IsingProblem> problems = load_problems(ben_problems);
        BenchConfig config;
        config.sampler.sweeps = ben_sweeps;
        config.baseline_reads = ben_baseline_reads;
        config.baseline_gauges = ben_gauges;
        config.ispvar.num_steps = ben_steps;
        config.ispvar.sample_size = ben_step_reads;
        config.ispvar.num_gauges = ben_gauges;
        config.ispvar.elite_thresholds.resize(ben_steps, 0.1);
        config.ispvar.fixing_thresholds.resize(ben_steps, 1.0);
        config.final_reads = ben_final_reads;
        config.method_enabled = !ben_no_method;
        config.threads = ben_threads;
        config.seed = ben_seed;
        BenchReport report = run_benchmark(problems, config);
        if (!ben_timings) {
            // reports stay byte-reproducible under a fixed seed
            for (InstanceResult& row : report.instances)
                row.baseline_seconds = row.method_seconds = 0.0;
        }
        write_json_file(ben_json, bench_report_to_json(report));
        if (!ben_csv.empty()) write_text(ben_csv, bench_report_to_csv(report));
        std::cout << "baseline success " << report.baseline.success_rate << "%";
        if (config.method_enabled)
            std::cout << ", method success " << report.method.success_rate << "%, fix "
                      << report.method.fix_rate << "%";
        std::cout << "\n";
    } else if (swp->parsed()) {
        std::vector<IsingProblem> problems = load_problems(swp_problems);
        SpvarParams params;
        params.sample_size = swp_sampler.reads;
        SweepGrid grid = sweep_thresholds(problems, swp_sampler.config(), params, swp_fixing,
                                          swp_elite, swp_success);
        write_text(swp_out, sweep_to_csv(grid));
        std::cout << "wrote " << swp_out << "\n";
    } else if (aut->parsed()) {
        IsingProblem problem = problem_from_json(read_json_file(aut_problem));
        SpvarParams params;
        params.sample_size = aut_sampler.reads;
        AutotuneResult result =
            autotune_elite(problem, aut_sampler.config(), params, aut_low, aut_high);
        nlohmann::json out = {{"elite_threshold", result.elite_threshold},
                              {"fixed_fraction", result.fixed_fraction},
                              {"elite_size", result.elite_size},
                              {"in_band", result.in_band}};
        std::cout << out.dump(2) << "\n";
        return result.in_band ? 0 : 2;
    } else if (f1->parsed()) {
        HardwareGraph graph = parse_chimera(f1_chimera, 0.0, f1_sampler.seed);
        auto series = biasrange_series(graph, f1_nmax, f1_count, f1_sampler.seed);
        SpvarParams params;
        params.sample_size = f1_sampler.reads;
        auto rows = fixedcount_vs_biasrange(series, f1_sampler.config(), params);
        write_text(f1_out, biasrange_to_csv(rows));
        std::cout << "wrote " << f1_out << "\n";
    } else if (f2->parsed()) {
        IsingProblem problem = problem_from_json(read_json_file(f2_problem));
        SampleSet samples = sample_multigauge(problem, f2_sampler.config(), f2_gauges);
        auto rows = correlation_vs_distance(problem, samples);
        write_text(f2_out, distance_to_csv(rows));
        std::cout << "wrote " << f2_out << "\n";
    } else if (cmp->parsed()) {
        std::vector<IsingProblem> problems = load_problems(cmp_problems);
        write_text(cmp_out, histogram_to_csv(component_histogram(problems)));
        std::cout << "wrote " << cmp_out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
