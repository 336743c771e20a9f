// Command-line front end: analyze a (state, channel) pair, check the
// data-processing chain of a two-stage evolution, construct recovery
// channels, and sweep channel families.
//
// Exit codes: 0 success (and "correctable" for the correct command),
// 1 not correctable, 2 spec/parse failure, 3 dimension mismatch,
// 4 numerical violation of an inequality that holds as a theorem
// (a library bug sentinel, never user error), 5 unwritable output path.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qchan/io.hpp"
#include "qchan/qchan.hpp"

namespace {

using qchan::DensityOperator;
using qchan::Index;
using qchan::KrausChannel;
using qchan::io::fixed6;

int run_analyze(const std::string& state, const std::string& channel, const std::string& format) {
  const DensityOperator<double> rho = qchan::io::parse_state_spec(state);
  const KrausChannel<double> ch = qchan::io::parse_channel_spec(channel);
  const auto rep = qchan::report(rho, ch);
  if (rep.fano_margin < -1e-9) {
    std::cerr << "fano inequality violated (margin " << rep.fano_margin << ")\n";
    return 4;
  }
  if (format == "json")
    std::cout << qchan::io::to_json(rep).dump(2) << "\n";
  else
    std::cout << qchan::io::to_text(rep);
  return 0;
}

int run_dpi(const std::string& state, const std::string& channel1, const std::string& channel2,
            const std::string& random, std::uint64_t seed, const std::string& format) {
  std::optional<DensityOperator<double>> rho;
  std::optional<KrausChannel<double>> ch1, ch2;

  if (!random.empty()) {
    if (random.rfind("d=", 0) != 0)
      throw qchan::io::ParseError("bad --random value '" + random + "' (expected d=<dim>)");
    const Index dim = qchan::io::detail::parse_dim(random.substr(2), random);
    qchan::rng::Engine g(seed);
    const Index rank = 1 + static_cast<Index>(g() % static_cast<std::uint64_t>(dim));
    rho.emplace(qchan::random_density<double>(dim, rank, g));
    ch1.emplace(qchan::random_channel<double>(dim, 1 + static_cast<Index>(g() % 4), g));
    ch2.emplace(qchan::random_channel<double>(dim, 1 + static_cast<Index>(g() % 4), g));
  } else {
    if (state.empty() || channel1.empty() || channel2.empty())
      throw qchan::io::ParseError("dpi needs --state, --channel and --channel2 (or --random)");
    rho.emplace(qchan::io::parse_state_spec(state));
    ch1.emplace(qchan::io::parse_channel_spec(channel1));
    ch2.emplace(qchan::io::parse_channel_spec(channel2));
  }

  const auto rep = qchan::dpi_report(*rho, *ch1, *ch2);
  const bool pass = rep.chain_holds();
  if (format == "json") {
    auto j = qchan::io::to_json(rep);
    j["chain_holds"] = pass;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << qchan::io::to_text(rep);
    std::cout << "chain: " << fixed6(rep.input_entropy) << " >= " << fixed6(rep.ie_stage1)
              << " >= " << fixed6(rep.ie_both) << (pass ? " PASS" : " FAIL") << "\n";
  }
  return pass ? 0 : 4;
}

int run_correct(const std::string& state, const std::string& channel, const std::string& out,
                double tol, const std::string& format) {
  const DensityOperator<double> rho = qchan::io::parse_state_spec(state);
  const KrausChannel<double> ch = qchan::io::parse_channel_spec(channel);
  const auto res = qchan::construct_corrector(rho, ch, tol);

  std::vector<std::string> files;
  if (res.corrector && !out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw qchan::io::FileError("cannot create directory '" + out + "'");
    const auto& ops = res.corrector->operators();
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const auto path = std::filesystem::path(out) / ("A_" + std::to_string(i) + ".json");
      qchan::io::write_matrix(ops[i], path);
      files.push_back(path.string());
      std::cerr << "wrote " << path.string() << "\n";
    }
  }

  if (format == "json") {
    std::cout << qchan::io::to_json(res, files).dump(2) << "\n";
  } else {
    std::cout << "deficit = " << fixed6(res.deficit) << "\n";
    std::cout << "verdict = " << (res.correctable ? "CORRECTABLE" : "NOT CORRECTABLE") << "\n";
    std::cout << "product_defect = " << fixed6(res.product_defect) << "\n";
    if (res.verified_fidelity)
      std::cout << "verified_fidelity = " << fixed6(*res.verified_fidelity) << "\n";
  }
  return res.correctable ? 0 : 1;
}

int run_sweep(const std::string& state, const std::string& channel_family,
              const std::string& range, const std::string& out) {
  if (channel_family.find("<p>") == std::string::npos)
    throw qchan::io::ParseError("sweep channel spec '" + channel_family +
                                "' has no <p> placeholder");

  // range: start,stop,steps
  double start = 0, stop = 0;
  long steps = 0;
  {
    const auto c1 = range.find(',');
    const auto c2 = range.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw qchan::io::ParseError("malformed range '" + range + "' (expected start,stop,steps)");
    start = qchan::io::detail::parse_number(range.substr(0, c1), range);
    stop = qchan::io::detail::parse_number(range.substr(c1 + 1, c2 - c1 - 1), range);
    steps = static_cast<long>(qchan::io::detail::parse_dim(range.substr(c2 + 1), range));
    if (steps < 2) throw qchan::io::ParseError("range '" + range + "' needs steps >= 2");
  }

  const DensityOperator<double> rho = qchan::io::parse_state_spec(state);
  const double s_in = qchan::von_neumann_entropy(rho);

  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw qchan::io::FileError("cannot write '" + out + "'");
  }
  std::ostream& os = out.empty() ? std::cout : file;

  os << "p,F_e,S_e,I_e,S_in,S_out,deficit\n";
  for (long i = 0; i < steps; ++i) {
    const double p = start + (stop - start) * double(i) / double(steps - 1);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    std::string spec = channel_family;
    for (auto pos = spec.find("<p>"); pos != std::string::npos; pos = spec.find("<p>"))
      spec.replace(pos, 3, buf);
    const KrausChannel<double> ch = qchan::io::parse_channel_spec(spec);

    const double fe = qchan::entanglement_fidelity(rho, ch);
    const double se = qchan::entropy_exchange(rho, ch);
    const double s_out =
        qchan::entropy_bits(qchan::herm_eig(qchan::apply_matrix(ch, rho.matrix())).eigenvalues);
    const double ie = s_out - se;
    const double deficit = std::max(s_in - ie, 0.0);
    os << fixed6(p) << ',' << fixed6(fe) << ',' << fixed6(se) << ',' << fixed6(ie) << ','
       << fixed6(s_in) << ',' << fixed6(s_out) << ',' << fixed6(deficit) << "\n";
  }
  if (!out.empty() && !file) throw qchan::io::FileError("write failed on '" + out + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy-quantum-channel analysis: entanglement fidelity, entropy exchange, "
               "coherent information, and perfect-correction construction"};
  app.require_subcommand(1);

  std::string state, channel, channel2, format = "text", out, range, random;
  double tol = 1e-7;
  std::uint64_t seed = 0;

  auto* analyze = app.add_subcommand("analyze", "Report F_e, S_e, I_e and the Fano bound");
  analyze->add_option("--state", state)->required();
  analyze->add_option("--channel", channel)->required();
  analyze->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* dpi = app.add_subcommand("dpi", "Check S(rho) >= I_e1 >= I_e12 for a two-stage process");
  dpi->add_option("--state", state);
  dpi->add_option("--channel", channel);
  dpi->add_option("--channel2", channel2);
  dpi->add_option("--random", random, "Generate a random instance, e.g. d=2");
  dpi->add_option("--seed", seed);
  dpi->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* correct = app.add_subcommand("correct", "Decide correctability and build the recovery");
  correct->add_option("--state", state)->required();
  correct->add_option("--channel", channel)->required();
  correct->add_option("--out", out, "Directory for the recovery's Kraus operator files");
  correct->add_option("--tol", tol, "Deficit tolerance (bits)");
  correct->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* sweep = app.add_subcommand("sweep", "CSV sweep of a channel family over a parameter");
  sweep->add_option("--state", state)->required();
  sweep->add_option("--channel", channel, "Channel spec with a <p> placeholder")->required();
  sweep->add_option("--range", range, "start,stop,steps")->required();
  sweep->add_option("--out", out, "CSV output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
    if (analyze->parsed()) return run_analyze(state, channel, format);
    if (dpi->parsed()) return run_dpi(state, channel, channel2, random, seed, format);
    if (correct->parsed()) return run_correct(state, channel, out, tol, format);
    if (sweep->parsed()) return run_sweep(state, channel, range, out);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const qchan::io::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const qchan::io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qchan::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
