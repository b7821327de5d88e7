// ksalg: command-line front end for the min/max/difference/mean algebra.
//
// Exit codes: 0 ok, 1 check or verification failure (and other errors),
// 2 malformed input, 3 data/width mismatch.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ksalg/checks.hpp"
#include "ksalg/classifier.hpp"
#include "ksalg/dataset.hpp"
#include "ksalg/expr_text.hpp"
#include "ksalg/network.hpp"
#include "ksalg/quantile.hpp"
#include "ksalg/search.hpp"
#include "ksalg/synthetic.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitMismatch = 3;

struct DataMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw std::runtime_error("cannot write '" + path + "'");
}

void require_width(const ksalg::Expr& f, std::size_t width) {
  auto supp = ksalg::support(f);
  if (!supp.empty() && *supp.rbegin() >= width) {
    throw DataMismatch("expression reads s" + std::to_string(*supp.rbegin()) + " but frames have " +
                       std::to_string(width) + " channel(s)");
  }
}

std::vector<std::size_t> parse_channels(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stoul(item));
  }
  return out;
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int cmd_eval(const std::string& expr_path, const std::string& frames_path) {
  const ksalg::Expr f = ksalg::parse_expr(read_file(expr_path));
  const auto rows = ksalg::read_frame_rows(read_file(frames_path));
  for (const auto& row : rows) {
    require_width(f, row.size());
    std::cout << fmt12(ksalg::evaluate(f, row)) << '\n';
  }
  return 0;
}

int cmd_synth_quantile(std::size_t n, std::size_t k, const std::string& source) {
  ksalg::ComparatorNetwork net;
  if (source == "bitonic") {
    net = ksalg::batcher_bitonic(n);
  } else if (source == "opt8") {
    if (n != 8) throw std::invalid_argument("source opt8 requires n = 8");
    net = ksalg::optimal_network_8();
  } else {
    throw std::invalid_argument("unknown source '" + source + "'");
  }
  const ksalg::Expr q = ksalg::quantile_circuit(n, k, net);
  std::cout << ksalg::print_expr(q) << '\n';
  std::cerr << "size: " << ksalg::size(q) << " depth: " << ksalg::depth(q) << '\n';
  return 0;
}

int cmd_verify(const std::string& path, std::size_t bitonic, bool opt8, bool print) {
  ksalg::ComparatorNetwork net;
  if (opt8) {
    net = ksalg::optimal_network_8();
  } else if (bitonic > 0) {
    net = ksalg::batcher_bitonic(bitonic);
  } else if (!path.empty()) {
    try {
      net = ksalg::parse_network(read_file(path));
    } catch (const std::invalid_argument& e) {
      throw ksalg::FormatError(e.what());
    }
  } else {
    throw std::invalid_argument("give a network file, --bitonic N or --opt8");
  }
  if (print) std::cout << ksalg::format_network(net);
  const bool sorts = ksalg::verify_sorts(net);
  std::cout << "sorts: " << (sorts ? "yes" : "no") << ", depth: " << net.depth()
            << ", comparators: " << net.comparator_count() << '\n';
  return sorts ? 0 : kExitFailure;
}

int cmd_train(const std::string& config_path, const std::string& data_path, const std::string& out_path,
              const std::vector<std::string>& overrides) {
  ksalg::SearchConfig config;
  if (!config_path.empty()) {
    try {
      config = ksalg::read_config(read_file(config_path));
    } catch (const std::invalid_argument& e) {
      throw ksalg::FormatError(std::string("config: ") + e.what());
    }
  }
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    ksalg::set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  const ksalg::Dataset data = ksalg::read_dataset_csv(read_file(data_path));
  const auto result = ksalg::evolve(data, config);
  write_file(out_path, ksalg::write_classifier(result.best));
  std::cerr << "best fitness: " << fmt12(result.best_fitness) << " after " << result.trace.size() - 1
            << " generation(s), " << result.evaluations << " evaluations\n";
  std::cerr << "expression: " << ksalg::print_expr(result.best.expr()) << '\n';
  std::cout << ksalg::format_metrics(ksalg::evaluate_on_dataset(result.best, data));
  return 0;
}

int cmd_classify(const std::string& classifier_path, const std::string& data_path, bool metrics_only) {
  const ksalg::Classifier cl = ksalg::read_classifier(read_file(classifier_path));
  const ksalg::Dataset data = ksalg::read_dataset_csv(read_file(data_path));
  require_width(cl.expr(), data.width());
  if (!metrics_only) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      std::cout << ksalg::to_string(ksalg::classify(cl, data.frame(i))) << '\n';
    }
  }
  std::cout << ksalg::format_metrics(ksalg::evaluate_on_dataset(cl, data));
  return 0;
}

int cmd_check(const std::string& suite) {
  bool ok = true;
  for (const auto& r : ksalg::run_suite(suite)) {
    ok = ok && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"min/max/difference/mean expression toolkit"};
  app.require_subcommand(1);

  std::string expr_path, frames_path;
  auto* eval = app.add_subcommand("eval", "Evaluate an expression on every frame of a CSV");
  eval->add_option("expr", expr_path, "Expression file")->required();
  eval->add_option("frames", frames_path, "Frame CSV (plain rows or labelled dataset)")->required();

  std::size_t qn = 0, qk = 0;
  std::string qsource = "bitonic";
  auto* synth = app.add_subcommand("synth-quantile", "Emit a binary min/max circuit for the k-th smallest of n");
  synth->add_option("-n,--n", qn, "Number of inputs")->required();
  synth->add_option("-k,--k", qk, "Rank, 1 = minimum")->required();
  synth->add_option("--source", qsource, "Comparator network: bitonic or opt8")->check(CLI::IsMember({"bitonic", "opt8"}));

  std::string net_path;
  std::size_t net_bitonic = 0;
  bool net_opt8 = false, net_print = false;
  auto* verify = app.add_subcommand("verify-network", "Zero-one check of a comparator network");
  verify->add_option("network", net_path, "Network file");
  verify->add_option("--bitonic", net_bitonic, "Use the bitonic network of this width");
  verify->add_flag("--opt8", net_opt8, "Use the built-in depth-6 network on 8 channels");
  verify->add_flag("--print", net_print, "Print the network in text form");

  std::string config_path, train_data, train_out = "-";
  std::vector<std::string> overrides;
  auto* train = app.add_subcommand("train", "Evolve a classifier on a labelled dataset");
  train->add_option("--config", config_path, "key = value search config");
  train->add_option("--data", train_data, "Dataset CSV")->required();
  train->add_option("-o,--out", train_out, "Classifier output file ('-' for stdout)");
  train->add_option("--set", overrides, "Config override key=value (repeatable)");

  std::string cl_path, cl_data;
  bool metrics_only = false;
  auto* classify = app.add_subcommand("classify", "Apply a classifier to a labelled dataset");
  classify->add_option("--classifier", cl_path, "Classifier file")->required();
  classify->add_option("--data", cl_data, "Dataset CSV")->required();
  classify->add_flag("--metrics-only", metrics_only, "Skip per-frame verdicts");

  ksalg::SyntheticParams gen = ksalg::default_synthetic_params();
  std::string class1 = "1,4", class2 = "2,6", gen_out = "-";
  double height = 3.0;
  auto* gen_data = app.add_subcommand("gen-data", "Generate a synthetic two-class spectral dataset");
  gen_data->add_option("--width", gen.width, "Channels per frame");
  gen_data->add_option("--per-class", gen.frames_per_class, "Frames per class");
  gen_data->add_option("--sigma", gen.sigma, "Noise standard deviation");
  gen_data->add_option("--shift-min", gen.shift_min, "Lower end of the volume shift range");
  gen_data->add_option("--shift-max", gen.shift_max, "Upper end of the volume shift range");
  gen_data->add_option("--seed", gen.seed, "Random seed");
  gen_data->add_option("--class1", class1, "Comma-separated bump channels of class 1");
  gen_data->add_option("--class2", class2, "Comma-separated bump channels of class 2");
  gen_data->add_option("--height", height, "Bump height");
  gen_data->add_option("-o,--out", gen_out, "Output CSV ('-' for stdout)");

  std::string suite = "all";
  auto* check = app.add_subcommand("check", "Run invariant suites");
  check->add_option("suite", suite, "Suite name")->check(CLI::IsMember(ksalg::suite_names()));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) return cmd_eval(expr_path, frames_path);
    if (*synth) return cmd_synth_quantile(qn, qk, qsource);
    if (*verify) return cmd_verify(net_path, net_bitonic, net_opt8, net_print);
    if (*train) return cmd_train(config_path, train_data, train_out, overrides);
    if (*classify) return cmd_classify(cl_path, cl_data, metrics_only);
    if (*gen_data) {
      gen.profiles = {ksalg::bump_profile(gen.width, parse_channels(class1), height),
                      ksalg::bump_profile(gen.width, parse_channels(class2), height)};
      write_file(gen_out, ksalg::write_dataset_csv(ksalg::generate_synthetic(gen).data));
      return 0;
    }
    if (*check) return cmd_check(suite);
  } catch (const ksalg::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ksalg::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DataMismatch& e) {
    std::cerr << "data mismatch: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
