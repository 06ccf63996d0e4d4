// cdc: coded distributed computing simulator front end.
//
// Subcommands: sweep, example1, example2, sort, random-placement. Every run
// is reproducible from its flags (plus --seed where it matters); the full
// configuration is echoed as '#' comment lines ahead of the CSV rows.
// Exit codes: 0 success, 1 bad usage or invalid parameters, 2 a run completed
// but violated an invariant (formula mismatch, oracle mismatch, bound breach).

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdc/bounds.hpp"
#include "cdc/engine.hpp"
#include "cdc/examples.hpp"
#include "cdc/sortapp.hpp"

namespace {

using cdc::Bytes;
using cdc::Rational;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvariant = 2;

// Output sink: a file when --output is given, stdout otherwise.
class Sink {
 public:
  bool open(const std::string& path) {
    if (path.empty() || path == "-") return true;
    file_.open(path, std::ios::binary);
    return static_cast<bool>(file_);
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string dec(const Rational& r) {
  std::ostringstream ss;
  ss << std::setprecision(12) << cdc::to_double(r);
  return ss.str();
}

// Deterministic synthetic job: value (q, n) is a splitmix64 byte stream keyed
// by the pair; reduce folds its non-padding inputs with XOR.
cdc::JobFunctions synthetic_functions(int function_count,
                                      std::int64_t value_bytes) {
  cdc::JobFunctions jf;
  jf.map_fn = [function_count, value_bytes](std::int64_t file, const Bytes&) {
    std::vector<Bytes> values;
    values.reserve(static_cast<std::size_t>(function_count));
    for (int q = 1; q <= function_count; ++q) {
      std::uint64_t state = 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(q) ^
                            0xBF58476D1CE4E5B9ull * static_cast<std::uint64_t>(file);
      Bytes v(static_cast<std::size_t>(value_bytes));
      std::uint64_t word = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i % 8 == 0) {
          state += 0x9E3779B97F4A7C15ull;
          word = state;
          word = (word ^ (word >> 30)) * 0xBF58476D1CE4E5B9ull;
          word = (word ^ (word >> 27)) * 0x94D049BB133111EBull;
          word ^= word >> 31;
        }
        v[i] = static_cast<std::uint8_t>(word >> ((i % 8) * 8));
      }
      values.push_back(std::move(v));
    }
    return values;
  };
  jf.reduce_fn = [value_bytes](int, const std::vector<Bytes>& values,
                               const std::vector<bool>& is_padding) {
    Bytes out(static_cast<std::size_t>(value_bytes), 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (is_padding[i]) continue;
      for (std::size_t b = 0; b < out.size(); ++b) out[b] ^= values[i][b];
    }
    return out;
  };
  return jf;
}

std::int64_t round_up(std::int64_t value, std::int64_t quantum) {
  return (value + quantum - 1) / quantum * quantum;
}

struct SweepParams {
  int nodes = 10;
  int functions = 10;
  std::int64_t files = 2520;
  std::int64_t value_bits = 1024;
  int replication = 1;
  int load_min = 1;
  int load_max = 0;  // 0 = nodes
  int workers = 0;
  std::string output;
};

int run_sweep(const SweepParams& p) {
  const int k = p.nodes;
  const int load_max = p.load_max == 0 ? k : p.load_max;
  if (k < 1 || k > 30) {
    std::cerr << "sweep: node count must lie in [1, 30]\n";
    return kExitUsage;
  }
  if (p.load_min < 1 || load_max > k || p.load_min > load_max) {
    std::cerr << "sweep: load range [" << p.load_min << ", " << load_max
              << "] outside [1, " << k << "]\n";
    return kExitUsage;
  }

  // All divisibility problems reported together, with the nearest valid sizes.
  std::vector<std::string> problems;
  const std::int64_t func_quantum = cdc::binom(k, p.replication);
  if (p.replication < 1 || p.replication > k) {
    std::cerr << "sweep: replication outside [1, " << k << "]\n";
    return kExitUsage;
  }
  if (p.functions % func_quantum != 0) {
    std::ostringstream ss;
    ss << "Q=" << p.functions << " is not a multiple of C(" << k << ","
       << p.replication << ")=" << func_quantum << "; nearest valid Q: "
       << round_up(p.functions, func_quantum);
    if (p.functions >= func_quantum)
      ss << " (or " << p.functions / func_quantum * func_quantum << ")";
    problems.push_back(ss.str());
  }
  std::int64_t file_quantum = 1;
  for (int r = p.load_min; r <= load_max; ++r) {
    const std::int64_t c = cdc::binom(k, r);
    if (p.files % c != 0) {
      std::ostringstream ss;
      ss << "N=" << p.files << " is not a multiple of C(" << k << "," << r
         << ")=" << c << " needed at load r=" << r;
      problems.push_back(ss.str());
    }
    file_quantum = std::lcm(file_quantum, c);
  }
  if (!problems.empty()) {
    if (p.files % file_quantum != 0) {
      std::ostringstream ss;
      ss << "nearest valid N at or above " << p.files << " for loads "
         << p.load_min << ".." << load_max << ": "
         << round_up(p.files, file_quantum) << " (any multiple of "
         << file_quantum << " works)";
      problems.push_back(ss.str());
    }
    for (const std::string& s : problems) std::cerr << "sweep: " << s << "\n";
    return kExitUsage;
  }

  Sink sink;
  if (!sink.open(p.output)) {
    std::cerr << "sweep: cannot open output file '" << p.output << "'\n";
    return kExitUsage;
  }
  std::ostream& os = sink.os();
  os << "# mode=sweep K=" << k << " Q=" << p.functions << " N=" << p.files
     << " T=" << p.value_bits << " s=" << p.replication << " r=" << p.load_min
     << ".." << load_max << " workers=" << p.workers << "\n";
  os << "r,l_uncoded,l_uncoded_dec,l_coded_formula,l_coded_formula_dec,"
        "l_measured,l_measured_dec,lower_bound,lower_bound_dec\n";

  const cdc::JobFunctions jf = synthetic_functions(
      p.functions, (p.value_bits + 7) / 8);
  cdc::EngineOptions opts;
  opts.workers = p.workers;

  for (int r = p.load_min; r <= load_max; ++r) {
    cdc::JobSpec spec;
    spec.node_count = k;
    spec.function_count = p.functions;
    spec.file_count = p.files;
    spec.computation_load = r;
    spec.reduce_replication = p.replication;
    spec.value_bits = p.value_bits;
    try {
      spec.validate();
      cdc::validate_value_bits(spec);
    } catch (const std::exception& e) {
      std::cerr << "sweep: r=" << r << ": " << e.what() << "\n";
      return kExitUsage;
    }

    std::vector<Bytes> inputs(static_cast<std::size_t>(p.files),
                              Bytes{0xCD});
    cdc::JobResult job =
        cdc::run_job(spec, jf, inputs, cdc::ShuffleStrategy::kCoded, 0, opts);
    const Rational measured = job.shuffle.report.load();
    const Rational formula = cdc::coded_load(r, p.replication, k);
    const Rational plain = cdc::uncoded_load(r, k);
    const cdc::ReplicationProfile profile =
        cdc::replication_profile(job.files, k, p.files);
    const Rational bound = cdc::load_lower_bound(profile, p.replication);

    os << r << ',' << cdc::to_fraction_string(plain) << ',' << dec(plain)
       << ',' << cdc::to_fraction_string(formula) << ',' << dec(formula)
       << ',' << cdc::to_fraction_string(measured) << ',' << dec(measured)
       << ',' << cdc::to_fraction_string(bound) << ',' << dec(bound) << "\n";

    if (measured != formula) {
      std::cerr << "sweep: measured load " << cdc::to_fraction_string(measured)
                << " != formula " << cdc::to_fraction_string(formula)
                << " at r=" << r << "\n";
      return kExitInvariant;
    }
    const cdc::OracleReport oracle =
        cdc::verify_against_oracle(spec, jf, inputs, job.outputs, &job.store);
    if (!oracle.ok) {
      std::cerr << "sweep: r=" << r << ": " << oracle.detail << "\n";
      return kExitInvariant;
    }
  }
  return kExitOk;
}

int run_example(int which, int workers, const std::string& output,
                const std::string& log_out) {
  const cdc::ExampleFixture fx =
      which == 1 ? cdc::example1_fixture() : cdc::example2_fixture();
  cdc::EngineOptions opts;
  opts.workers = workers;
  const cdc::FixtureReport report = cdc::replay_example(fx, opts);

  Sink sink;
  if (!sink.open(output)) {
    std::cerr << fx.name << ": cannot open output file '" << output << "'\n";
    return kExitUsage;
  }
  std::ostream& os = sink.os();
  os << "# mode=" << fx.name << " workers=" << workers << "\n";
  os << "fixture,result,load,messages,detail\n";
  os << fx.name << ',' << (report.pass ? "pass" : "fail") << ','
     << cdc::to_fraction_string(report.measured_load) << ','
     << report.message_count << ',' << report.detail << "\n";

  if (!log_out.empty()) {
    std::ofstream lf(log_out, std::ios::binary);
    if (!lf) {
      std::cerr << fx.name << ": cannot open log file '" << log_out << "'\n";
      return kExitUsage;
    }
    lf.write(reinterpret_cast<const char*>(report.log_bytes.data()),
             static_cast<std::streamsize>(report.log_bytes.size()));
  }
  return report.pass ? kExitOk : kExitInvariant;
}

struct SortParams {
  int nodes = 10;
  int load = 3;
  std::int64_t records = 100000;
  int key_bytes = 10;
  int value_bytes = 90;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string output;
  std::string records_out;
};

int run_sort_mode(const SortParams& p) {
  cdc::SortConfig config;
  config.node_count = p.nodes;
  config.computation_load = p.load;
  config.record_count = p.records;
  config.key_bytes = p.key_bytes;
  config.value_bytes = p.value_bytes;
  config.seed = p.seed;
  config.engine.workers = p.workers;
  try {
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "sort: " << e.what() << "\n";
    return kExitUsage;
  }

  const cdc::SortRunResult result = cdc::run_coded_sort(config);

  Sink sink;
  if (!sink.open(p.output)) {
    std::cerr << "sort: cannot open output file '" << p.output << "'\n";
    return kExitUsage;
  }
  std::ostream& os = sink.os();
  os << "# mode=sort K=" << p.nodes << " r=" << p.load << " records="
     << p.records << " key_bytes=" << p.key_bytes << " value_bytes="
     << p.value_bytes << " seed=" << p.seed << " workers=" << p.workers
     << "\n";
  os << "# value_bits=" << result.value_bits << " useful_density="
     << cdc::to_fraction_string(result.useful_density) << " oracle="
     << (result.matches_oracle ? "pass" : "fail") << "\n";
  os << cdc::LoadReport::csv_header() << ",useful_load,useful_load_dec\n";
  for (const cdc::SortStrategyOutcome* outcome :
       {&result.coded, &result.uncoded}) {
    os << outcome->report.csv_row() << ','
       << cdc::to_fraction_string(outcome->useful_load) << ','
       << dec(outcome->useful_load) << "\n";
  }

  if (!p.records_out.empty()) {
    std::ofstream rf(p.records_out, std::ios::binary);
    if (!rf) {
      std::cerr << "sort: cannot open records file '" << p.records_out
                << "'\n";
      return kExitUsage;
    }
    rf.write(reinterpret_cast<const char*>(result.sorted.data()),
             static_cast<std::streamsize>(result.sorted.size()));
  }

  if (!result.matches_oracle) {
    std::cerr << "sort: output differs from the single-machine oracle\n";
    return kExitInvariant;
  }
  if (p.load >= 2 && result.coded.useful_load > result.uncoded.useful_load) {
    std::cerr << "sort: coded useful load "
              << cdc::to_fraction_string(result.coded.useful_load)
              << " exceeds uncoded "
              << cdc::to_fraction_string(result.uncoded.useful_load) << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

struct RandomParams {
  int nodes = 6;
  int load = 2;
  int replication = 1;
  int functions = 0;  // 0 = C(nodes, replication)
  std::int64_t files = 24;
  std::int64_t value_bits = 64;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string output;
};

int run_random_mode(const RandomParams& p) {
  cdc::JobSpec spec;
  spec.node_count = p.nodes;
  spec.function_count =
      p.functions == 0 ? static_cast<int>(cdc::binom(p.nodes, p.replication))
                       : p.functions;
  spec.file_count = p.files;
  spec.computation_load = p.load;
  spec.reduce_replication = p.replication;
  spec.value_bits = p.value_bits;
  try {
    spec.validate();
    cdc::validate_value_bits(spec, /*variable_batch_sizes=*/true);
  } catch (const std::exception& e) {
    std::cerr << "random-placement: " << e.what() << "\n";
    return kExitUsage;
  }

  cdc::EngineOptions opts;
  opts.workers = p.workers;
  const cdc::JobFunctions jf = synthetic_functions(
      spec.function_count, (spec.value_bits + 7) / 8);
  std::vector<Bytes> inputs(static_cast<std::size_t>(p.files), Bytes{0xCD});

  const cdc::FileAssignment fa = cdc::random_placement(spec, p.seed);
  const cdc::ReduceAssignment ra = cdc::assign_reduce_tasks(spec);
  const cdc::ReplicationProfile profile =
      cdc::replication_profile(fa, p.nodes, p.files);
  const Rational bound = cdc::load_lower_bound(profile, p.replication);

  Sink sink;
  if (!sink.open(p.output)) {
    std::cerr << "random-placement: cannot open output file '" << p.output
              << "'\n";
    return kExitUsage;
  }
  std::ostream& os = sink.os();
  os << "# mode=random-placement K=" << p.nodes << " r=" << p.load
     << " s=" << p.replication << " Q=" << spec.function_count
     << " N=" << p.files << " T=" << p.value_bits << " seed=" << p.seed
     << " workers=" << p.workers << "\n";
  os << "# profile=";
  for (int j = 1; j <= p.nodes; ++j)
    os << (j > 1 ? "," : "") << profile.count(j);
  os << " lower_bound=" << cdc::to_fraction_string(bound) << " ("
     << dec(bound) << ")\n";
  os << cdc::LoadReport::csv_header() << "\n";

  bool violated = false;
  std::string violation;
  for (const cdc::ShuffleStrategy strategy :
       {cdc::ShuffleStrategy::kRandomPlacementCoded,
        cdc::ShuffleStrategy::kUncoded}) {
    cdc::IntermediateStore store = cdc::run_map_phase(spec, fa, jf, inputs, opts);
    cdc::ShuffleResult shuffle =
        cdc::run_shuffle(spec, fa, ra, store, strategy, opts);
    const std::vector<std::map<int, Bytes>> outputs =
        cdc::run_reduce_phase(spec, ra, store, jf, opts);
    const cdc::OracleReport oracle =
        cdc::verify_against_oracle(spec, jf, inputs, outputs, &store);
    os << shuffle.report.csv_row() << "\n";
    if (!oracle.ok) {
      violated = true;
      violation = oracle.detail;
    } else if (shuffle.report.load() < bound) {
      violated = true;
      violation = "measured load " +
                  cdc::to_fraction_string(shuffle.report.load()) +
                  " below the lower bound " + cdc::to_fraction_string(bound) +
                  " for " + cdc::to_string(strategy);
    }
  }
  if (violated) {
    std::cerr << "random-placement: " << violation << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cdc: coded distributed computing simulator.\n"
      "Maps files redundantly across nodes, replaces the all-to-all shuffle\n"
      "with coded multicasts, and accounts every transmitted bit exactly.\n"
      "CSV goes to stdout unless --output is given; '#' lines echo the\n"
      "configuration. Exit codes: 0 ok, 1 invalid parameters, 2 invariant\n"
      "violation."};
  app.require_subcommand(1);
  app.set_config("--config")
      ->description("Read options from a key=value file (flags win)")
      ->check(CLI::ExistingFile);

  SweepParams sweep;
  CLI::App* sw = app.add_subcommand(
      "sweep",
      "Sweep the computation load r and emit CSV columns\n"
      "r,l_uncoded,l_uncoded_dec,l_coded_formula,l_coded_formula_dec,"
      "l_measured,l_measured_dec,lower_bound,lower_bound_dec\n"
      "(exact fractions plus decimals). The measured column comes from a\n"
      "full engine run and must equal the formula.");
  sw->configurable(true);
  sw->add_option("-K,--nodes", sweep.nodes, "Cluster size K")
      ->capture_default_str();
  sw->add_option("-Q,--functions", sweep.functions,
                 "Output count; multiple of C(K,s)")
      ->capture_default_str();
  sw->add_option("-N,--files", sweep.files,
                 "Input file count; multiple of C(K,r) for every swept r")
      ->capture_default_str();
  sw->add_option("-T,--value-bits", sweep.value_bits,
                 "Bits per intermediate value")
      ->capture_default_str();
  sw->add_option("-s,--replication", sweep.replication,
                 "Nodes reducing each output")
      ->capture_default_str();
  sw->add_option("--load-min", sweep.load_min, "First r")
      ->capture_default_str();
  sw->add_option("--load-max", sweep.load_max, "Last r (0 = K)")
      ->capture_default_str();
  sw->add_option("-w,--workers", sweep.workers, "Worker threads (0 = auto)")
      ->capture_default_str();
  sw->add_option("-o,--output", sweep.output, "CSV path ('-' = stdout)");

  int ex_workers = 0;
  std::string ex_output;
  std::string ex_log_out;
  for (const int which : {1, 2}) {
    CLI::App* ex = app.add_subcommand(
        which == 1 ? "example1" : "example2",
        which == 1
            ? "Replay the three-node worked example against its golden log"
            : "Replay the four-node doubly-reduced example against its "
              "golden log");
    ex->configurable(true);
    ex->add_option("-w,--workers", ex_workers, "Worker threads (0 = auto)");
    ex->add_option("-o,--output", ex_output, "Report CSV path ('-' = stdout)");
    ex->add_option("--log-out", ex_log_out,
                   "Also dump the multicast log bytes to this file");
  }

  SortParams sort_params;
  CLI::App* so = app.add_subcommand(
      "sort",
      "Distributed sort of fixed-width random records, run with both the\n"
      "coded and the plain shuffle on identical data and checked against a\n"
      "single-machine oracle. CSV columns: the engine load report plus\n"
      "useful_load (padding excluded).");
  so->configurable(true);
  so->add_option("-K,--nodes", sort_params.nodes, "Cluster size (= key ranges)")
      ->capture_default_str();
  so->add_option("-r,--load", sort_params.load, "Computation load")
      ->capture_default_str();
  so->add_option("-n,--records", sort_params.records, "Record count")
      ->capture_default_str();
  so->add_option("--key-bytes", sort_params.key_bytes, "Key width")
      ->capture_default_str();
  so->add_option("--value-bytes", sort_params.value_bytes, "Value width")
      ->capture_default_str();
  so->add_option("--seed", sort_params.seed, "Record generator seed")
      ->capture_default_str();
  so->add_option("-w,--workers", sort_params.workers, "Worker threads (0 = auto)")
      ->capture_default_str();
  so->add_option("-o,--output", sort_params.output, "CSV path ('-' = stdout)");
  so->add_option("--records-out", sort_params.records_out,
                 "Write the sorted records to this file");

  RandomParams random_params;
  CLI::App* rp = app.add_subcommand(
      "random-placement",
      "Map each file at r uniformly random nodes, shuffle with the coded and\n"
      "plain strategies, and check both loads against the placement's lower\n"
      "bound.");
  rp->configurable(true);
  rp->add_option("-K,--nodes", random_params.nodes, "Cluster size")
      ->capture_default_str();
  rp->add_option("-r,--load", random_params.load, "Computation load")
      ->capture_default_str();
  rp->add_option("-s,--replication", random_params.replication,
                 "Nodes reducing each output")
      ->capture_default_str();
  rp->add_option("-Q,--functions", random_params.functions,
                 "Output count (0 = C(K,s))")
      ->capture_default_str();
  rp->add_option("-N,--files", random_params.files, "Input file count")
      ->capture_default_str();
  rp->add_option("-T,--value-bits", random_params.value_bits,
                 "Bits per intermediate value")
      ->capture_default_str();
  rp->add_option("--seed", random_params.seed, "Placement seed")
      ->capture_default_str();
  rp->add_option("-w,--workers", random_params.workers,
                 "Worker threads (0 = auto)")
      ->capture_default_str();
  rp->add_option("-o,--output", random_params.output,
                 "CSV path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sw->parsed()) return run_sweep(sweep);
    if (app.get_subcommand("example1")->parsed())
      return run_example(1, ex_workers, ex_output, ex_log_out);
    if (app.get_subcommand("example2")->parsed())
      return run_example(2, ex_workers, ex_output, ex_log_out);
    if (so->parsed()) return run_sort_mode(sort_params);
    if (rp->parsed()) return run_random_mode(random_params);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUsage;
}
