// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>

#include "plt/cachesim.hpp"
#include "plt/codec.hpp"
#include "plt/error.hpp"
#include "plt/hybrid.hpp"
#include "plt/model.hpp"
#include "plt/trie.hpp"

namespace plt::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes through a temporary sibling so a failed command never leaves a partial file.
void write_output(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path.empty()) {
    out << bytes;
    return;
  }
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidArgument("cannot write " + path);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InvalidArgument("cannot write " + path);
    }
  }
  fs::rename(tmp, target);
}

std::vector<std::string> read_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

ModelPtr load_model(const std::string& path) { return parse_model(read_file(path)); }

Rational rational_arg(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const InvalidArgument&) {
    throw InvalidArgument(std::string(flag) + " expects a rational such as 1/256, got '" + text + "'");
  }
}

// Symbols of a corpus: whitespace-separated when any line has whitespace, else characters.
std::vector<std::string> infer_symbols(const std::vector<std::string>& lines) {
  bool spaced = false;
  for (const auto& l : lines) spaced = spaced || l.find_first_of(" \t") != std::string::npos;
  std::set<std::string> names;
  for (const auto& l : lines) {
    if (spaced) {
      std::istringstream in(l);
      std::string w;
      while (in >> w) names.insert(w);
    } else {
      for (char c : l) names.insert(std::string(1, c));
    }
  }
  return {names.begin(), names.end()};
}

std::string format_number(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

struct Outputs {
  std::string out_path;
  std::string format = "text";
};

void add_out(CLI::App* cmd, Outputs& o) { cmd->add_option("--out", o.out_path, "Output file (default: stdout)"); }

void add_format(CLI::App* cmd, Outputs& o) {
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "text"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic language trie toolkit", "pltc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // model-build
  auto* build = app.add_subcommand("model-build", "Build or canonicalize a model file");
  std::string kind, corpus_path, vocab_names, from_path, smoothing = "1", alpha = "1", escape;
  std::size_t order = 2, items = 0;
  Outputs build_out;
  build->add_option("--kind", kind, "ngram | zipf")->check(CLI::IsMember({"ngram", "zipf"}));
  build->add_option("--from", from_path, "Model file to canonicalize")->check(CLI::ExistingFile);
  build->add_option("--corpus", corpus_path, "Training sequences, one per line")->check(CLI::ExistingFile);
  build->add_option("--vocab", vocab_names, "Space-separated symbols (default: inferred from the corpus)");
  build->add_option("--order", order, "n-gram order")->check(CLI::Range(1, 64));
  build->add_option("--smoothing", smoothing, "Add-constant smoothing k");
  build->add_option("--items", items, "Zipf support size");
  build->add_option("--alpha", alpha, "Zipf exponent");
  build->add_option("--escape", escape, "Wrap the model with this escape probability");
  add_out(build, build_out);

  // trie-dump
  auto* dump = app.add_subcommand("trie-dump", "Materialize a trie and print its nodes");
  std::string model_path, threshold = "0";
  std::size_t depth = 4;
  Outputs dump_out;
  dump->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  dump->add_option("--depth", depth, "Maximum prefix length");
  dump->add_option("--threshold", threshold, "Prune prefixes below this probability");
  add_out(dump, dump_out);

  // encode
  auto* encode = app.add_subcommand("encode", "Interval code and range-coded bits of one sequence");
  std::string seq_text;
  Outputs encode_out;
  encode->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  encode->add_option("--seq", seq_text, "Sequence text")->required();
  add_out(encode, encode_out);

  // decode
  auto* decode = app.add_subcommand("decode", "Recover a sequence from a point, a bit string or an encode output");
  std::string point, bits_text, in_path;
  Outputs decode_out;
  decode->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  auto* point_opt = decode->add_option("--point", point, "Rational point in [0, 1)");
  auto* bits_opt = decode->add_option("--bits", bits_text, "Range-coded bit string");
  auto* decode_in = decode->add_option("--in", in_path, "File written by encode")->check(CLI::ExistingFile);
  point_opt->excludes(bits_opt)->excludes(decode_in);
  bits_opt->excludes(decode_in);
  add_out(decode, decode_out);

  // pack
  auto* pack_cmd = app.add_subcommand("pack", "Hybrid-compress a dataset");
  std::string data_path, epsilon = "1/256", lossy_threshold = "1/4096";
  std::uint32_t tau = 0;
  bool lossy = false;
  std::size_t lossy_depth = 8;
  Outputs pack_out;
  pack_cmd->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  pack_cmd->add_option("--data", data_path, "Sequences, one per line")->required()->check(CLI::ExistingFile);
  pack_cmd->add_option("--tau", tau, "Coverage threshold in bits")->required();
  pack_cmd->add_option("--epsilon", epsilon, "Escape probability");
  pack_cmd->add_flag("--lossy", lossy, "Store residuals as pointers to their nearest covered item");
  pack_cmd->add_option("--trie-depth", lossy_depth, "Trie depth for --lossy");
  pack_cmd->add_option("--trie-threshold", lossy_threshold, "Trie prune threshold for --lossy");
  pack_cmd->add_option("--out", pack_out.out_path, "Archive file")->required();

  // unpack
  auto* unpack_cmd = app.add_subcommand("unpack", "Restore a dataset from an archive");
  Outputs unpack_out;
  unpack_cmd->add_option("--in", in_path, "Archive file")->required()->check(CLI::ExistingFile);
  add_out(unpack_cmd, unpack_out);

  // dl-report
  auto* dl = app.add_subcommand("dl-report", "Description length of an archive");
  Outputs dl_out;
  dl->add_option("--in", in_path, "Archive file")->required()->check(CLI::ExistingFile);
  add_format(dl, dl_out);
  add_out(dl, dl_out);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a cache campaign");
  std::string config_path;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  Outputs sim_out;
  sim->add_option("--config", config_path, "Campaign file (key = value)")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", seed, "RNG seed")->required();
  sim->add_option("--threads", threads, "Worker threads (0: all cores)");
  add_format(sim, sim_out);
  add_out(sim, sim_out);

  // coverage
  auto* cov = app.add_subcommand("coverage", "Fraction of Zipf mass in the top K items");
  std::uint64_t cov_k = 0, cov_m = 0;
  double cov_alpha = 1;
  int precision = 4;
  Outputs cov_out;
  cov->add_option("--K", cov_k)->required();
  cov->add_option("--M", cov_m)->required();
  cov->add_option("--alpha", cov_alpha);
  cov->add_option("--precision", precision)->check(CLI::Range(0, 17));
  add_format(cov, cov_out);
  add_out(cov, cov_out);

  // breakeven
  auto* be = app.add_subcommand("breakeven", "Requests needed to amortize precomputing the covered set");
  std::uint64_t be_size = 0;
  double be_compute = 1, be_lookup = 0, be_pstar = 0;
  int be_precision = 2;
  Outputs be_out;
  be->add_option("--size", be_size, "|C_T|")->required();
  be->add_option("--compute", be_compute, "C_c");
  be->add_option("--lookup", be_lookup, "C_l");
  be->add_option("--p-star", be_pstar, "Probability mass of the covered set")->required();
  be->add_option("--precision", be_precision)->check(CLI::Range(0, 17));
  add_format(be, be_out);
  add_out(be, be_out);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*build) {
      ModelPtr model;
      if (!from_path.empty()) {
        if (!kind.empty()) throw InvalidArgument("--from and --kind are exclusive");
        model = load_model(from_path);
      } else if (kind == "ngram") {
        if (corpus_path.empty()) throw InvalidArgument("--kind ngram needs --corpus");
        auto lines = read_lines(read_file(corpus_path));
        std::vector<std::string> names;
        if (vocab_names.empty()) {
          names = infer_symbols(lines);
        } else {
          std::istringstream in(vocab_names);
          for (std::string w; in >> w;) names.push_back(w);
        }
        Vocabulary vocab(names);
        std::vector<Sequence> corpus;
        for (const auto& l : lines) corpus.push_back(vocab.parse_sequence(l));
        model = ngram_model(vocab, corpus, order, rational_arg(smoothing, "--smoothing"));
      } else if (kind == "zipf") {
        if (items == 0) throw InvalidArgument("--kind zipf needs --items >= 1");
        model = zipf_model(items, rational_arg(alpha, "--alpha"));
      } else {
        throw InvalidArgument("model-build needs --kind or --from");
      }
      if (!escape.empty()) model = with_escape(model, rational_arg(escape, "--escape"));
      write_output(build_out.out_path, model->serialize(), out);
    } else if (*dump) {
      auto model = load_model(model_path);
      auto trie = Plt::materialize(model, depth, rational_arg(threshold, "--threshold"));
      write_output(dump_out.out_path, trie.dump(), out);
    } else if (*encode) {
      auto model = load_model(model_path);
      Sequence s = model->vocabulary().parse_sequence(seq_text);
      IntervalCode code = encode_interval(*model, s);
      Bitstream bits = encode_bits(*model, s);
      std::ostringstream text;
      text << "interval [" << to_string(code.interval.low) << ", " << to_string(code.interval.high) << "), "
           << code.length.bits << " bits\n";
      text << "code " << bits.to_string() << "\n";
      write_output(encode_out.out_path, text.str(), out);
    } else if (*decode) {
      auto model = load_model(model_path);
      Sequence s;
      if (!point.empty()) {
        Rational z = rational_arg(point, "--point");
        if (sgn(z) < 0 || z >= 1) throw InvalidArgument("--point must lie in [0, 1)");
        s = decode_interval(*model, z);
      } else if (!bits_text.empty()) {
        s = decode_bits(*model, Bitstream::from_string(bits_text));
      } else if (!in_path.empty()) {
        bool found = false;
        for (const auto& line : read_lines(read_file(in_path))) {
          if (line.rfind("code ", 0) == 0) {
            std::string b = line.substr(5);
            Bitstream stream;
            try {
              stream = Bitstream::from_string(b);
            } catch (const InvalidArgument& e) {
              throw FormatError(std::string("encode output: ") + e.what(), 0);
            }
            s = decode_bits(*model, stream);
            found = true;
            break;
          }
        }
        if (!found) throw FormatError("encode output has no code line", 0);
      } else {
        throw InvalidArgument("decode needs --point, --bits or --in");
      }
      write_output(decode_out.out_path, model->vocabulary().format_sequence(s) + "\n", out);
    } else if (*pack_cmd) {
      auto model = load_model(model_path);
      std::vector<std::string> unknown;
      std::vector<Sequence> dataset;
      for (const auto& l : read_lines(read_file(data_path))) {
        dataset.push_back(model->vocabulary().parse_sequence(l, &unknown));
      }
      Rational eps = rational_arg(epsilon, "--epsilon");
      HybridArchive archive;
      if (lossy) {
        auto trie = Plt::materialize(model, lossy_depth, rational_arg(lossy_threshold, "--trie-threshold"));
        archive = lossy_pack(model, trie, dataset, {tau}, eps).archive;
        if (archive.extra_symbol_count > 0) archive.extra_symbols = unknown;
      } else {
        archive = pack(model, dataset, {tau}, eps, unknown);
      }
      auto bytes = write_archive(archive);
      write_output(pack_out.out_path, std::string(bytes.begin(), bytes.end()), out);
    } else if (*unpack_cmd) {
      auto raw = read_file(in_path);
      auto archive = read_archive(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
      std::string text;
      for (const auto& s : unpack(archive)) {
        text += archive.model->vocabulary().format_sequence(s, archive.extra_symbols) + "\n";
      }
      write_output(unpack_out.out_path, text, out);
    } else if (*dl) {
      auto raw = read_file(in_path);
      auto archive = read_archive(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
      auto d = description_length(archive);
      std::size_t covered = archive.covered.size();
      double fraction =
          archive.dataset_size == 0 ? 0 : static_cast<double>(covered) / static_cast<double>(archive.dataset_size);
      std::ostringstream text;
      if (dl_out.format == "csv") {
        text << "model_bits,covered_bits,residual_bits,total,covered,dataset,covered_fraction\n"
             << d.model_bits << ',' << d.covered_bits << ',' << d.residual_bits << ',' << d.total() << ',' << covered
             << ',' << archive.dataset_size << ',' << format_number(fraction, 6) << '\n';
      } else {
        text << "model_bits       " << d.model_bits << '\n'
             << "covered_bits     " << d.covered_bits << '\n'
             << "residual_bits    " << d.residual_bits << '\n'
             << "total            " << d.total() << '\n'
             << "covered_fraction " << covered << '/' << archive.dataset_size << " = " << format_number(fraction, 6)
             << '\n';
      }
      write_output(dl_out.out_path, text.str(), out);
    } else if (*sim) {
      auto campaign = cache::parse_campaign(read_file(config_path));
      campaign.spec.seed = seed;
      if (sim->count("--threads")) campaign.options.threads = threads;
      auto report = cache::simulate(campaign.spec, campaign.capacity, campaign.cost, campaign.options);
      std::ostringstream text;
      cache::write_report(text, report, sim_out.format == "csv" ? cache::ReportFormat::csv : cache::ReportFormat::text);
      write_output(sim_out.out_path, text.str(), out);
    } else if (*cov) {
      double value = cache::zipf_coverage(cov_k, cov_m, cov_alpha);
      double approx = cov_m > 1 && cov_k >= 1 ? std::log(static_cast<double>(cov_k)) / std::log(static_cast<double>(cov_m))
                                              : NAN;
      std::ostringstream text;
      if (cov_out.format == "csv") {
        text << "K,M,alpha,coverage,ln_ratio\n"
             << cov_k << ',' << cov_m << ',' << cov_alpha << ',' << format_number(value, precision) << ','
             << format_number(approx, precision) << '\n';
      } else {
        text << format_number(value, precision) << '\n';
        text << "ln K / ln M " << format_number(approx, precision) << '\n';
      }
      write_output(cov_out.out_path, text.str(), out);
    } else if (*be) {
      cache::CostModel cost{be_compute, be_lookup, 0};
      cost.validate();
      double t = cache::break_even(be_size, cost, be_pstar);
      std::ostringstream text;
      if (be_out.format == "csv") {
        text << "size,compute,lookup,p_star,requests\n"
             << be_size << ',' << be_compute << ',' << be_lookup << ',' << be_pstar << ','
             << format_number(t, be_precision) << '\n';
      } else {
        text << format_number(t, be_precision) << '\n';
      }
      write_output(be_out.out_path, text.str(), out);
    }
  } catch (const InvalidArgument& e) {
    err << "pltc: " << e.what() << '\n';
    return kUsageError;
  } catch (const FormatError& e) {
    err << "pltc: " << e.what() << '\n';
    return kDataError;
  } catch (const UnencodableError& e) {
    err << "pltc: " << e.what() << '\n';
    return kDataError;
  } catch (const DecodeError& e) {
    err << "pltc: " << e.what() << '\n';
    return kDataError;
  } catch (const AbsoluteContinuityError& e) {
    err << "pltc: " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "pltc: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace plt::cli
