// Acceptance suite: one fixture or property per criterion, each printing a
// single PASS/FAIL line. Exits nonzero when any criterion fails.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli_runner.hpp"
#include "qchan/io.hpp"
#include "qchan/qchan.hpp"
#include "test_support.hpp"

using namespace qchan;
namespace fs = std::filesystem;

namespace {

struct Checker {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }

  void close(double actual, double expected, double tol, const std::string& what) {
    if (std::abs(actual - expected) > tol && ok) {
      ok = false;
      detail = what + ": got " + std::to_string(actual) + ", want " + std::to_string(expected);
    }
  }
};

int g_failures = 0;

void criterion(int id, const std::string& name, const std::function<void(Checker&)>& body) {
  Checker c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] criterion %2d: %s%s\n", c.ok ? "PASS" : "FAIL", id, name.c_str(),
              c.ok ? "" : ("  -- " + c.detail).c_str());
  if (!c.ok) ++g_failures;
}

fs::path fixture_dir() {
  const fs::path dir = fs::temp_directory_path() / "qchan_acceptance";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

int main() {
  criterion(1, "dephasing(0.25) on I/2: F_e, S_e, I_e", [](Checker& c) {
    const auto rep = report(support::max_mixed(2), dephasing(0.25));
    c.close(rep.entanglement_fidelity, 0.75, 1e-6, "F_e");
    c.close(rep.entropy_exchange, support::kH25, 1e-6, "S_e");
    c.close(rep.coherent_information, 1.0 - support::kH25, 1e-6, "I_e");
  });

  criterion(2, "full depolarizing {sigma/2} on I/2, Fano tight", [](Checker& c) {
    const auto rep = report(support::max_mixed(2), support::pauli_twirl());
    c.close(rep.entanglement_fidelity, 0.25, 1e-6, "F_e");
    c.close(rep.entropy_exchange, 2.0, 1e-6, "S_e");
    c.close(rep.coherent_information, -1.0, 1e-6, "I_e");
    const double lhs = binary_entropy(0.25) + 0.75 * support::kLog2_3;
    c.close(lhs - rep.entropy_exchange, 0.0, 1e-6, "Fano tightness");
  });

  criterion(3, "two-qubit flip code: constructor succeeds perfectly", [](Checker& c) {
    const auto rho = support::code_state();
    const auto ch = support::x1_error_channel(0.3);
    // oracle: S(rho') = 1 + h(0.3), S_e = h(0.3)
    c.close(entropy_bits(herm_eig(apply_matrix(ch, rho.matrix())).eigenvalues),
            1.0 + support::kH30, 1e-9, "S(rho')");
    c.close(entropy_exchange(rho, ch), support::kH30, 1e-9, "S_e");

    const auto res = construct_corrector(rho, ch);
    c.require(res.deficit <= 1e-9, "deficit <= 1e-9");
    c.require(res.correctable && res.corrector.has_value(), "constructor succeeds");
    if (!res.corrector) return;
    c.require(*res.verified_fidelity >= 1.0 - 1e-8, "F_e12 >= 1 - 1e-8");
    const auto ver = verify_correction(rho, ch, *res.corrector);
    c.require(ver.restoration_distance <= 1e-7, "state restored within 1e-7");
    c.require(environment_info_check(rho, ch) <= 1e-7, "environment product defect <= 1e-7");
  });

  criterion(4, "dephasing refusal and necessity under 200 random recoveries", [](Checker& c) {
    const auto rho = support::max_mixed(2);
    const auto ch = dephasing(0.25);
    const auto res = construct_corrector(rho, ch);
    c.close(res.deficit, support::kH25, 1e-6, "deficit");
    c.require(!res.correctable && !res.corrector.has_value(), "corrector refused");
    rng::Engine g(20260809);
    for (int i = 0; i < 200; ++i) {
      const auto recovery = support::measure_rotate_recovery(2, g);
      const auto ver = verify_correction(rho, ch, recovery);
      c.require(ver.fidelity < 1.0 - 1e-8, "recovery " + std::to_string(i) + " stays below 1");
    }
  });

  criterion(5, "data-processing chain on 100 (d=2) + 50 (d=3) random triples", [](Checker& c) {
    rng::Engine g(5);
    const auto run = [&](Index d, int count) {
      for (int i = 0; i < count; ++i) {
        const auto rho = random_density<double>(d, 1 + Index(g() % d), g);
        const auto ch1 = random_channel<double>(d, 1 + Index(g() % 4), g);
        const auto ch2 = random_channel<double>(d, 1 + Index(g() % 4), g);
        const auto rep = dpi_report(rho, ch1, ch2);
        c.require(rep.input_entropy >= rep.ie_stage1 - 1e-9,
                  "S >= I_e1 - 1e-9 (d=" + std::to_string(d) + ")");
        c.require(rep.ie_stage1 - 1e-9 >= rep.ie_both - 2e-9,
                  "I_e1 - 1e-9 >= I_e12 - 2e-9 (d=" + std::to_string(d) + ")");
      }
    };
    run(2, 100);
    run(3, 50);
  });

  criterion(6, "F_e <= average fidelity on 100 random relative-state ensembles", [](Checker& c) {
    rng::Engine g(6);
    for (int i = 0; i < 100; ++i) {
      const Index d = 2 + Index(g() % 2);
      const auto rho = random_density<double>(d, 1 + Index(g() % d), g);
      const auto ch = random_channel<double>(d, 1 + Index(g() % 4), g);
      const auto psi = purify(rho);
      const Index r = psi.layout().factors().front().dim;
      const auto e = relative_state_ensemble(psi, rng::random_unitary<double>(r, g));
      c.require(entanglement_fidelity(rho, ch) <= average_fidelity(e, ch) + 1e-9,
                "instance " + std::to_string(i));
    }
  });

  criterion(7, "quantum Fano inequality on 100 random instances", [](Checker& c) {
    rng::Engine g(7);
    for (int i = 0; i < 100; ++i) {
      const Index d = 2 + Index(g() % 2);
      const auto rho = random_density<double>(d, 1 + Index(g() % d), g);
      const auto ch = random_channel<double>(d, 1 + Index(g() % 4), g);
      c.require(report(rho, ch).fano_margin >= -1e-9, "margin at instance " + std::to_string(i));
    }
    for (int i = 0; i < 10; ++i) {
      const Index d = 2 + Index(g() % 2);
      const auto rho = random_density<double>(d, d, g);
      const auto uch = unitary_channel(rng::random_unitary<double>(d, g));
      c.require(entanglement_fidelity(rho, unitary_channel(
                    CMat<double>(CMat<double>::Identity(d, d)))) >= 1.0 - 1e-12,
                "identity F_e");
      c.require(entropy_exchange(rho, uch) <= 1e-8, "S_e of a unitary channel");
    }
  });

  criterion(8, "F_e, S_e, I_e and Choi invariant under 50 random remixes", [](Checker& c) {
    rng::Engine g(8);
    for (int i = 0; i < 50; ++i) {
      const Index d = 2 + Index(g() % 2);
      const Index m = 1 + Index(g() % 4);
      const auto ch = random_channel<double>(d, m, g);
      const auto rho = random_density<double>(d, 1 + Index(g() % d), g);
      const CMat<double> v = rng::random_isometry<double>(m + Index(i % 2), m, g);
      const auto mixed = remix(ch, v);
      c.require(std::abs(entanglement_fidelity(rho, ch) - entanglement_fidelity(rho, mixed)) <=
                    1e-9,
                "F_e shift");
      c.require(std::abs(entropy_exchange(rho, ch) - entropy_exchange(rho, mixed)) <= 1e-9,
                "S_e shift");
      c.require(std::abs(coherent_information(rho, ch) - coherent_information(rho, mixed)) <=
                    1e-9,
                "I_e shift");
      c.require((choi(ch).matrix() - choi(mixed).matrix()).norm() <= 1e-9, "Choi shift");
    }
  });

  criterion(9, "dilation round trip and S_e cross-route on 50 random channels", [](Checker& c) {
    rng::Engine g(9);
    for (int i = 0; i < 50; ++i) {
      const Index d = 2 + Index(g() % 2);
      const auto ch = random_channel<double>(d, 1 + Index(g() % 4), g);
      const auto back = from_dilation(to_dilation(ch));
      c.require((choi(back).matrix() - choi(ch).matrix()).norm() <= 1e-8,
                "round trip at instance " + std::to_string(i));

      const auto rho = random_density<double>(d, 1 + Index(g() % d), g);
      const double s_w = entropy_bits(herm_eig(w_matrix(rho, ch).matrix()).eigenvalues);
      const auto js = rq_and_re_states(rho, ch);
      const double s_rq = von_neumann_entropy(js.rho_rq);
      c.require(std::abs(s_w - s_rq) <= 1e-8, "S_e routes at instance " + std::to_string(i));
    }
  });

  criterion(10, "strong subadditivity on 100 random 2x2x2 states", [](Checker& c) {
    rng::Engine g(10);
    const SubsystemLayout layout{{"A", 2}, {"B", 2}, {"C", 2}};
    for (int i = 0; i < 100; ++i) {
      const auto rho = random_density<double>(8, 1 + Index(g() % 8), g).with_layout(layout);
      const double lhs = von_neumann_entropy(rho) + von_neumann_entropy(rho.reduced({"B"}));
      const double rhs = von_neumann_entropy(rho.reduced({"A", "B"})) +
                         von_neumann_entropy(rho.reduced({"B", "C"}));
      c.require(lhs <= rhs + 1e-9, "instance " + std::to_string(i));
    }
  });

  criterion(11, "CLI contract: analyze, dpi and correct fixtures", [](Checker& c) {
    // analyze fixtures
    {
      const auto r = cli::run("analyze --state maxmixed:2 --channel dephasing:0.25");
      c.require(r.exit_code == 0, "analyze dephasing exit");
      const auto kv = cli::parse_kv(r.out);
      c.require(kv.at("entanglement_fidelity") == "0.750000", "analyze dephasing F_e");
      c.require(kv.at("entropy_exchange") == "0.811278", "analyze dephasing S_e");
      c.require(kv.at("coherent_information") == "0.188722", "analyze dephasing I_e");
    }
    {
      const auto r = cli::run("analyze --state maxmixed:2 --channel identity:2");
      c.require(r.exit_code == 0, "analyze identity exit");
      const auto kv = cli::parse_kv(r.out);
      c.require(kv.at("entanglement_fidelity") == "1.000000", "analyze identity F_e");
      c.require(kv.at("entropy_exchange") == "0.000000", "analyze identity S_e");
      c.require(kv.at("coherent_information") == "1.000000", "analyze identity I_e");
    }
    {
      const auto r = cli::run("analyze --state maxmixed:2 --channel depolarizing:1.0");
      c.require(r.exit_code == 0, "analyze depolarizing exit");
      const auto kv = cli::parse_kv(r.out);
      c.require(kv.at("entanglement_fidelity") == "0.250000", "analyze depolarizing F_e");
      c.require(kv.at("entropy_exchange") == "2.000000", "analyze depolarizing S_e");
      c.require(kv.at("coherent_information") == "-1.000000", "analyze depolarizing I_e");
    }
    // dpi fixture
    {
      const auto r =
          cli::run("dpi --state maxmixed:2 --channel dephasing:0.25 --channel2 dephasing:0.25");
      c.require(r.exit_code == 0, "dpi exit");
      c.require(r.out.find("chain: 1.000000 >= 0.188722 >= 0.045566 PASS") != std::string::npos,
                "dpi chain line");
    }
    // correct fixtures
    {
      const fs::path dir = fixture_dir();
      CMat<double> code = CMat<double>::Zero(4, 2);
      code(0, 0) = 1;
      code(3, 1) = 1;
      io::write_matrix(code, dir / "code.json");
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& op : support::x1_error_channel(0.3).operators())
        arr.push_back(io::matrix_to_json(op));
      std::ofstream(dir / "x1.json") << arr.dump(2);

      const auto r = cli::run("correct --state codespace:@" + (dir / "code.json").string() +
                              " --channel kraus:@" + (dir / "x1.json").string());
      c.require(r.exit_code == 0, "correct code fixture exit");
      const auto kv = cli::parse_kv(r.out);
      c.require(kv.at("deficit") == "0.000000", "correct code deficit");
      c.require(kv.at("verdict") == "CORRECTABLE", "correct code verdict");
      c.require(kv.at("verified_fidelity") == "1.000000", "correct code fidelity");
    }
    {
      const auto r = cli::run("correct --state maxmixed:2 --channel dephasing:0.25");
      c.require(r.exit_code == 1, "correct refusal exit");
      const auto kv = cli::parse_kv(r.out);
      c.require(kv.at("deficit") == "0.811278", "correct refusal deficit");
      c.require(kv.at("verdict") == "NOT CORRECTABLE", "correct refusal verdict");
    }
  });

  if (g_failures > 0) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
