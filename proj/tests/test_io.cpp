#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qchan/io.hpp"
#include "qchan/qchan.hpp"
#include "test_support.hpp"

using namespace qchan;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  const fs::path dir = fs::temp_directory_path() / "qchan_io_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("matrix files round-trip bit-exactly") {
  rng::Engine g(3);
  CMat<double> m(3, 4);
  for (Index r = 0; r < 3; ++r)
    for (Index c = 0; c < 4; ++c)
      m(r, c) = Complex<double>(rng::gaussian(g), rng::gaussian(g));

  const fs::path path = tmp_dir() / "round_trip.json";
  io::write_matrix(m, path);
  const CMat<double> back = io::read_matrix(path);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 4);
  for (Index r = 0; r < 3; ++r)
    for (Index c = 0; c < 4; ++c) {
      CHECK(back(r, c).real() == m(r, c).real());
      CHECK(back(r, c).imag() == m(r, c).imag());
    }
}

TEST_CASE("matrix file validation") {
  const fs::path dir = tmp_dir();

  const fs::path missing = dir / "missing.json";
  CHECK_THROWS_AS(io::read_matrix(missing), io::ParseError);

  const fs::path bad_len = dir / "bad_len.json";
  std::ofstream(bad_len) << R"({"rows": 2, "cols": 2, "data": [[1, 0]]})";
  CHECK_THROWS_AS(io::read_matrix(bad_len), io::ParseError);

  const fs::path bad_pair = dir / "bad_pair.json";
  std::ofstream(bad_pair) << R"({"rows": 1, "cols": 1, "data": [[1, 0, 0]]})";
  CHECK_THROWS_AS(io::read_matrix(bad_pair), io::ParseError);

  const fs::path not_json = dir / "not_json.json";
  std::ofstream(not_json) << "rows: nope";
  CHECK_THROWS_AS(io::read_matrix(not_json), io::ParseError);

  CHECK_THROWS_AS(io::write_matrix(CMat<double>::Identity(2, 2), dir / "no_dir" / "x.json"),
                  io::FileError);
}

TEST_CASE("state specs") {
  const auto mm = io::parse_state_spec("maxmixed:3");
  CHECK(mm.dim() == 3);
  CHECK((mm.matrix() - CMat<double>(CMat<double>::Identity(3, 3) / 3.0)).norm() < 1e-12);

  const fs::path dir = tmp_dir();

  CVec<double> plus(2);
  plus[0] = plus[1] = 1.0 / std::sqrt(2.0);
  io::write_matrix(plus, dir / "plus.json");
  const auto pure = io::parse_state_spec("pure:@" + (dir / "plus.json").string());
  CHECK((pure.matrix() - PureState<double>(plus).projector()).norm() < 1e-12);

  io::write_matrix(CMat<double>::Identity(2, 2) / 2.0, dir / "mixed.json");
  const auto dens = io::parse_state_spec("density:@" + (dir / "mixed.json").string());
  CHECK(dens.dim() == 2);

  // codespace {|00⟩, |11⟩} mixes to the two-qubit code state
  CMat<double> code = CMat<double>::Zero(4, 2);
  code(0, 0) = 1;
  code(3, 1) = 1;
  io::write_matrix(code, dir / "code.json");
  const auto cs = io::parse_state_spec("codespace:@" + (dir / "code.json").string());
  CHECK((cs.matrix() - support::code_state().matrix()).norm() < 1e-12);

  CMat<double> skew = code;
  skew(0, 1) = 1;  // not orthonormal
  io::write_matrix(skew, dir / "skew.json");
  CHECK_THROWS_AS(io::parse_state_spec("codespace:@" + (dir / "skew.json").string()),
                  io::ParseError);

  CHECK_THROWS_AS(io::parse_state_spec("maxmixed:0"), io::ParseError);
  CHECK_THROWS_AS(io::parse_state_spec("maxmixed:x"), io::ParseError);
  CHECK_THROWS_AS(io::parse_state_spec("thermal:2"), io::ParseError);
  CHECK_THROWS_AS(io::parse_state_spec("maxmixed"), io::ParseError);
  CHECK_THROWS_AS(io::parse_state_spec("pure:notafile"), io::ParseError);
}

TEST_CASE("channel specs") {
  CHECK(io::parse_channel_spec("identity:3").dim() == 3);
  CHECK((choi(io::parse_channel_spec("dephasing:0.25")).matrix() -
         choi(dephasing(0.25)).matrix())
            .norm() < 1e-12);
  CHECK((choi(io::parse_channel_spec("bitflip:0.5")).matrix() - choi(bit_flip(0.5)).matrix())
            .norm() < 1e-12);
  CHECK((choi(io::parse_channel_spec("depolarizing:1")).matrix() -
         choi(depolarizing(1.0)).matrix())
            .norm() < 1e-12);
  CHECK((choi(io::parse_channel_spec("amplitude-damping:0.3")).matrix() -
         choi(amplitude_damping(0.3)).matrix())
            .norm() < 1e-12);

  const fs::path dir = tmp_dir();
  rng::Engine g(7);
  const CMat<double> u = rng::random_unitary<double>(2, g);
  io::write_matrix(u, dir / "u.json");
  const auto uch = io::parse_channel_spec("unitary:@" + (dir / "u.json").string());
  CHECK((choi(uch).matrix() - choi(unitary_channel(u)).matrix()).norm() < 1e-12);

  {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& op : dephasing(0.25).operators()) arr.push_back(io::matrix_to_json(op));
    std::ofstream(dir / "kraus.json") << arr.dump(2);
  }
  const auto kch = io::parse_channel_spec("kraus:@" + (dir / "kraus.json").string());
  CHECK((choi(kch).matrix() - choi(dephasing(0.25)).matrix()).norm() < 1e-12);

  CHECK_THROWS_AS(io::parse_channel_spec("dephasing:1.5"), io::ParseError);
  CHECK_THROWS_AS(io::parse_channel_spec("dephasing:abc"), io::ParseError);
  CHECK_THROWS_AS(io::parse_channel_spec("nosuch:1"), io::ParseError);
  CHECK_THROWS_AS(io::parse_channel_spec("unitary:u.json"), io::ParseError);
}

TEST_CASE("6-decimal rendering") {
  CHECK(io::fixed6(0.75) == "0.750000");
  CHECK(io::fixed6(-1.0) == "-1.000000");
  CHECK(io::fixed6(-1e-12) == "0.000000");
  CHECK(io::fixed6(0.8112781244591328) == "0.811278");
}

TEST_CASE("report serialization uses the declared field names") {
  const auto rep = report(support::max_mixed(2), dephasing(0.25));
  const auto j = io::to_json(rep);
  for (const char* key : {"input_entropy", "output_entropy", "entanglement_fidelity",
                          "entropy_exchange", "coherent_information", "fano_lhs", "fano_margin"})
    CHECK(j.contains(key));
  CHECK(j["entanglement_fidelity"].get<double>() == doctest::Approx(0.75));

  const std::string text = io::to_text(rep);
  CHECK(text.find("entanglement_fidelity = 0.750000") != std::string::npos);
  CHECK(text.find("entropy_exchange = 0.811278") != std::string::npos);
  CHECK(text.find("coherent_information = 0.188722") != std::string::npos);

  const auto dpi = dpi_report(support::max_mixed(2), dephasing(0.25), dephasing(0.25));
  const auto jd = io::to_json(dpi);
  for (const char* key : {"input_entropy", "ie_stage1", "ie_both", "se_stage1", "se_both"})
    CHECK(jd.contains(key));
}
