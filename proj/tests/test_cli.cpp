#include <pshlab/cli.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace pshlab;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("pshlab");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    out.push_back(text.substr(pos, nl - pos));
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return out;
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

double cell_num(const std::string& cell) { return std::stod(cell); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  REQUIRE(bool(f));
  f << text;
}

}  // namespace

TEST_CASE("weight specs build atoms and radial components") {
  const auto one = parse_weight("atom 0.5 0 1");
  REQUIRE(one.atoms().size() == 1);
  CHECK(one.atoms()[0].location == Complex(0.5));
  CHECK(one.atoms()[0].mass == 1.0);
  CHECK_FALSE(one.has_radial());

  const auto pair = parse_weight("atom 0.3 0 1 + atom 0 -0.4 1");
  REQUIRE(pair.atoms().size() == 2);
  CHECK(pair.atoms()[1].location == Complex(0.0, -0.4));

  const auto rad = parse_weight("radial 0.5");
  REQUIRE(rad.radial_components().size() == 1);
  CHECK(rad.radial_components()[0].beta == 0.5);
  CHECK(rad.radial_components()[0].kappa == 1.0);
  CHECK(rad.radial_components()[0].s_max == 1.0);

  const auto full = parse_weight("radial 0.25 2 0.75 + atom 0.1 0.2 0.5");
  CHECK(full.radial_components()[0].kappa == 2.0);
  CHECK(full.radial_components()[0].s_max == 0.75);
  CHECK(full.atoms().size() == 1);

  CHECK_THROWS_WITH(parse_weight("blob 1"),
                    Catch::Matchers::ContainsSubstring("unknown component") &&
                        Catch::Matchers::ContainsSubstring("column 1"));
  CHECK_THROWS_WITH(parse_weight("atom 0.5 0"),
                    Catch::Matchers::ContainsSubstring("atom takes"));
  // domain violations surface with the component position attached
  CHECK_THROWS_WITH(parse_weight("atom 0.5 0 1 + atom 2 0 1"),
                    Catch::Matchers::ContainsSubstring("open disk") &&
                        Catch::Matchers::ContainsSubstring("column 16"));
  CHECK_THROWS_WITH(parse_weight("atom 0.5 0 1 +"),
                    Catch::Matchers::ContainsSubstring("dangling '+'"));
  CHECK_THROWS_WITH(parse_weight(""),
                    Catch::Matchers::ContainsSubstring("empty"));
  CHECK_THROWS_WITH(parse_weight("atom x 0 1"),
                    Catch::Matchers::ContainsSubstring("expected a number"));
}

TEST_CASE("fixture specs build evaluable functions") {
  const Complex w(0.3, 0.1);
  CHECK(parse_function("z")(w) == w);
  CHECK(parse_function("one")(w) == Complex(1.0));
  CHECK(std::abs(parse_function("affine -0.5 1")(w) - (w - 0.5)) < 1e-15);
  CHECK(std::abs(parse_function("poly 1 0.3 0.2")(w) -
                 (1.0 + 0.3 * w + 0.2 * w * w)) < 1e-15);
  CHECK(std::abs(parse_function("pow 0.3")(w) - branch_power(0.3)(w)) <
        1e-15);
  CHECK(std::abs(parse_function("const 2i * z")(w) - Complex(0, 2) * w) <
        1e-15);
  CHECK(std::abs(parse_function("one + z")(w) - (1.0 + w)) < 1e-15);

  // products of affine factors keep their zero structure for deflation
  const auto prod = parse_function("affine -0.5 1 * affine 0.5i 1");
  REQUIRE(prod.zeros().has_value());
  CHECK(prod.zeros()->size() == 2);
  CHECK(std::abs(prod(w) - (w - 0.5) * (w + Complex(0, 0.5))) < 1e-15);

  const auto b = parse_function("blaschke 0.5");
  CHECK(std::abs(std::abs(b(Complex(std::polar(1.0 - 1e-12, 0.7)))) - 1.0) <
        1e-9);

  // complex literals in all spellings
  CHECK(parse_function("const 1-0.5i")(w) == Complex(1.0, -0.5));
  CHECK(parse_function("const i")(w) == Complex(0.0, 1.0));
  CHECK(parse_function("const -i")(w) == Complex(0.0, -1.0));
  CHECK(parse_function("const 0.4i")(w) == Complex(0.0, 0.4));
  CHECK(parse_function("const 1e-2+2e-1i")(w) == Complex(0.01, 0.2));

  CHECK_THROWS_WITH(parse_function("qqq 3"),
                    Catch::Matchers::ContainsSubstring("unknown factor") &&
                        Catch::Matchers::ContainsSubstring("column 1"));
  CHECK_THROWS_WITH(parse_function("pow"),
                    Catch::Matchers::ContainsSubstring("pow takes"));
  CHECK_THROWS_WITH(parse_function("const 1+2j"),
                    Catch::Matchers::ContainsSubstring("complex literal"));
  CHECK_THROWS_WITH(parse_function("z * * z"),
                    Catch::Matchers::ContainsSubstring("dangling '*'"));
  CHECK_THROWS_WITH(parse_function("blaschke 1.5"),
                    Catch::Matchers::ContainsSubstring("column 1"));
}

TEST_CASE("grids parse with validation and positions") {
  CHECK(parse_grid("0.9,0.99,0.999", "t-grid") ==
        std::vector<double>{0.9, 0.99, 0.999});
  CHECK(parse_grid(" -1 , -0.3 ", "r-grid") ==
        std::vector<double>{-1.0, -0.3});
  CHECK(parse_grid("2", "p list") == std::vector<double>{2.0});
  CHECK_THROWS_WITH(parse_grid("0.9,,0.99", "t-grid"),
                    Catch::Matchers::ContainsSubstring("empty entry") &&
                        Catch::Matchers::ContainsSubstring("column 5"));
  CHECK_THROWS_WITH(parse_grid("0.9,abc", "t-grid"),
                    Catch::Matchers::ContainsSubstring("expected a number") &&
                        Catch::Matchers::ContainsSubstring("column 5"));
  CHECK_THROWS_WITH(parse_grid("", "p list"),
                    Catch::Matchers::ContainsSubstring("empty entry"));
}

TEST_CASE("csv cells are fixed-format with literal divergence tokens") {
  CHECK(csv_num(1.0) == "1.000000000000e+00");
  CHECK(csv_num(-0.001) == "-1.000000000000e-03");
  CHECK(csv_num(kInf) == "inf");
  CHECK(csv_num(-kInf) == "-inf");
  CHECK(csv_int(42) == "42");

  CsvTable t({"a", "b"});
  t.row({"1", "2"});
  CHECK(t.text() == "a,b\n1,2\n");
  CHECK_THROWS_AS(t.row({"only"}), std::logic_error);
  CHECK_THROWS_AS(t.row({"x,y", "z"}), std::logic_error);
}

TEST_CASE("config text parses key-value lines with positions") {
  const auto entries = cdetail::parse_config_text(
      "# header comment\n"
      "weight = atom 0.5 0 1\n"
      "\n"
      "p = 1.5,2   # trailing comment\n"
      "out = report.csv\r\n",
      "cfg");
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].key == "weight");
  CHECK(entries[0].value == "atom 0.5 0 1");
  CHECK(entries[0].line == 2);
  CHECK(entries[1].value == "1.5,2");
  CHECK(entries[2].value == "report.csv");

  CHECK_THROWS_WITH(cdetail::parse_config_text("p 2\n", "cfg"),
                    Catch::Matchers::ContainsSubstring(
                        "cfg:1:1: expected 'key = value'"));
  CHECK_THROWS_WITH(cdetail::parse_config_text("P = 2\n", "cfg"),
                    Catch::Matchers::ContainsSubstring(
                        "cfg:1:1: invalid key character 'P'"));
  CHECK_THROWS_WITH(cdetail::parse_config_text("p =\n", "cfg"),
                    Catch::Matchers::ContainsSubstring("cfg:1:4: empty value"));
  CHECK_THROWS_WITH(
      cdetail::parse_config_text("p = 2\np = 3\n", "cfg"),
      Catch::Matchers::ContainsSubstring("cfg:2:1: duplicate key 'p'"));
}

TEST_CASE("density subcommand emits the flat atom profile") {
  const CliRun r = run({"density", "--weight", "atom 0 0 1", "--angles", "32"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 33);
  CHECK(lines[0] == "theta,alpha,verdict,tag");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = cells_of(lines[k]);
    REQUIRE(cells.size() == 4);
    CHECK(cells[0] == csv_num(kTwoPi * double(k - 1) / 32.0));
    CHECK(cells[1] == "1.000000000000e+00");
    CHECK(cells[2] == "finite");
    CHECK(cells[3] == "Prop 4.2");
  }

  const CliRun rad =
      run({"density", "--weight", "radial 0.5", "--angles", "16"});
  REQUIRE(rad.code == 0);
  const auto rl = lines_of(rad.out);
  REQUIRE(rl.size() == 17);
  const auto contact = cells_of(rl[1]);
  CHECK(contact[1] == "inf");
  CHECK(contact[2] == "divergent");
  for (std::size_t k = 2; k < rl.size(); ++k) {
    const auto cells = cells_of(rl[k]);
    CHECK(cell_num(cells[1]) > 0.0);
    CHECK(cells[2] == "finite");
  }
}

TEST_CASE("norm rows carry values from both routes") {
  const CliRun r = run({"norm", "--weight", "atom 0.5 0 1", "--f",
                        "affine 1 1", "--p", "0.5,2"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "f,p,boundary,interior,classical,gap,verdict,tag");

  const auto half = cells_of(lines[1]);
  REQUIRE(half.size() == 8);
  CHECK(half[1] == csv_num(0.5));
  CHECK(half[3].empty());  // no interior route below p = 1
  CHECK(half[6] == "finite");

  const auto two = cells_of(lines[2]);
  CHECK(cell_num(two[2]) == Catch::Approx(std::sqrt(3.0)).epsilon(1e-9));
  CHECK(cell_num(two[3]) == Catch::Approx(std::sqrt(3.0)).epsilon(1e-6));
  CHECK(cell_num(two[4]) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(cell_num(two[5]) < 1e-4);
  CHECK(two[7] == "Thm 6.4");
}

TEST_CASE("membership emits the borderline verdict row") {
  const CliRun r = run({"membership", "--f", "pow 0.3", "--weight",
                        "radial 0.5", "--p", "2"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "f,p,verdict,classical_exponent,weighted_exponent,predicted_slope,"
        "fitted_slope,note,tag");
  const auto row = cells_of(lines[1]);
  REQUIRE(row.size() == 9);
  CHECK(row[2] == "non_member");
  CHECK(cell_num(row[3]) == Catch::Approx(0.6).margin(1e-12));
  CHECK(cell_num(row[4]) == Catch::Approx(1.1).margin(1e-12));
  CHECK(cell_num(row[6]) == Catch::Approx(-0.1).margin(0.01));
  CHECK(row[7] ==
        "trace fails p-integrability against the boundary density");
}

TEST_CASE("measure sweeps the level grid in order") {
  const CliRun r = run({"measure", "--weight", "atom 0.5 0 1", "--f",
                        "affine 1 0.5", "--p", "2", "--r-grid",
                        "-0.1,-0.01"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "f,p,r,value,error,converged,tag");
  const auto a = cells_of(lines[1]);
  const auto b = cells_of(lines[2]);
  CHECK(cell_num(a[2]) == -0.1);
  CHECK(cell_num(b[2]) == -0.01);
  CHECK(cell_num(a[3]) == Catch::Approx(1.7072648767).epsilon(1e-6));
  CHECK(cell_num(b[3]) == Catch::Approx(1.7450821285).epsilon(1e-6));
  CHECK(cell_num(a[3]) < cell_num(b[3]));
  CHECK(a[5] == "1");
  CHECK(a[6] == "Thm 2.1");
}

TEST_CASE("deflate and isometry subcommands report factorization data") {
  const CliRun d = run({"deflate", "--weight", "atom 0.3 0 1", "--f",
                        "affine -0.5 1 * affine 0.5i 1", "--p", "2"});
  REQUIRE(d.code == 0);
  const auto dr = cells_of(lines_of(d.out)[1]);
  REQUIRE(dr.size() == 7);
  CHECK(cell_num(dr[2]) == Catch::Approx(std::sqrt(1.1875)).epsilon(1e-6));
  CHECK(std::fabs(cell_num(dr[3]) - cell_num(dr[2])) / cell_num(dr[2]) <=
        1e-3);
  CHECK(cell_num(dr[4]) <= 1e-3);
  CHECK(dr[6] == "Thm 6.1");

  const CliRun i = run({"isometry", "--weight", "atom 0.5 0 1", "--f",
                        "affine 1 1", "--p", "2"});
  REQUIRE(i.code == 0);
  const auto ir = cells_of(lines_of(i.out)[1]);
  REQUIRE(ir.size() == 8);
  CHECK(cell_num(ir[2]) == Catch::Approx(std::sqrt(3.0)).epsilon(1e-6));
  CHECK(cell_num(ir[3]) == Catch::Approx(std::sqrt(3.0)).epsilon(1e-3));
  CHECK(cell_num(ir[5]) <= 1e-10);
  CHECK(ir[7] == "Thm 7.3");

  // unsupported deflation fixtures are configuration errors
  const CliRun bad = run({"deflate", "--weight", "atom 0.3 0 1", "--f",
                          "one + z", "--p", "2"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("error") != std::string::npos);
}

TEST_CASE("probe charts the atom sweep with a witness flag") {
  const CliRun r = run({"probe", "--f", "affine 0.5 1", "--p", "2",
                        "--t-grid", "0.9,0.99"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "f,p,t,value,witness,verdict,tag");
  const auto a = cells_of(lines[1]);
  const auto b = cells_of(lines[2]);
  CHECK(cell_num(a[3]) == Catch::Approx(2.15).margin(1e-9));
  CHECK(cell_num(b[3]) == Catch::Approx(2.24).margin(1e-9));
  CHECK(a[4] == "1");  // first exceedance of the unit ball
  CHECK(b[4] == "0");
  CHECK(a[6] == "Thm 7.2");

  const CliRun inside = run({"probe", "--f", "affine 0 0.9", "--p", "2",
                             "--t-grid", "0.9,0.99"});
  for (std::size_t k = 1; k < 3; ++k) {
    const auto row = cells_of(lines_of(inside.out)[k]);
    CHECK(cell_num(row[3]) < 1.0);
    CHECK(row[4] == "0");
  }
}

TEST_CASE("config files merge under flags and reject junk") {
  const std::string dir = "/tmp/pshlab_cli_test";
  std::filesystem::create_directories(dir);

  write_file(dir + "/good.cfg",
             "# norm experiment\n"
             "weight = atom 0.5 0 1\n"
             "f = affine 1 1\n"
             "p = 2\n");
  const CliRun ok = run({"norm", "--config", dir + "/good.cfg"});
  REQUIRE(ok.code == 0);
  const auto row = cells_of(lines_of(ok.out)[1]);
  CHECK(row[0] == "affine 1 1");
  CHECK(cell_num(row[2]) == Catch::Approx(std::sqrt(3.0)).epsilon(1e-9));

  // flags win over file entries
  const CliRun over =
      run({"norm", "--config", dir + "/good.cfg", "--f", "z"});
  REQUIRE(over.code == 0);
  const auto orow = cells_of(lines_of(over.out)[1]);
  CHECK(orow[0] == "z");
  CHECK(cell_num(orow[2]) == Catch::Approx(1.0).epsilon(1e-9));

  write_file(dir + "/unknown.cfg", "weigth = atom 0.5 0 1\n");
  const CliRun unk = run({"norm", "--config", dir + "/unknown.cfg"});
  CHECK(unk.code == 2);
  CHECK(unk.err.find(":1:1: unknown key 'weigth'") != std::string::npos);

  write_file(dir + "/badvalue.cfg",
             "weight = atom 0.5 0 1\nf = z\np = abc\n");
  const CliRun bad = run({"norm", "--config", dir + "/badvalue.cfg"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find(":3:5:") != std::string::npos);
  CHECK(bad.err.find("expected a number") != std::string::npos);

  // keys legal elsewhere are rejected where they make no sense
  write_file(dir + "/wrongkey.cfg", "suite = core\n");
  const CliRun wrong = run({"norm", "--config", dir + "/wrongkey.cfg"});
  CHECK(wrong.code == 2);
  CHECK(wrong.err.find("unknown key 'suite' for command 'norm'") !=
        std::string::npos);

  const CliRun missing = run({"norm", "--config", dir + "/absent.cfg"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open config file") != std::string::npos);
}

TEST_CASE("exit codes separate usage, verification, and success") {
  CHECK(run({"norm", "--f", "z"}).code == 2);           // missing weight
  CHECK(run({"norm", "--weight", "zzz 1", "--f", "z"}).code == 2);
  CHECK(run({"measure", "--weight", "atom 0.5 0 1", "--f", "z", "--r-grid",
             "0.1"})
            .code == 2);  // r must be negative
  CHECK(run({}).code == 2);                             // no subcommand
  CHECK(run({"frobnicate"}).code == 2);

  const CliRun help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("verify") != std::string::npos);

  const CliRun pass = run({"verify", "--suite", "1"});
  CHECK(pass.code == 0);
  CHECK(pass.out.find("C01") != std::string::npos);
  CHECK(pass.out.find("PASS") != std::string::npos);
  CHECK(pass.err.empty());

  CHECK(run({"verify", "--suite", "nonsense"}).code == 2);
  CHECK(run({"verify", "--suite", "0,5"}).code == 2);
}

TEST_CASE("failing checks list their tags and exit 1") {
  // the partial-sum semicontinuity proxy is the known-deficient check: the
  // truncation tail of the borderline trace closes like a 0.1-power, far
  // outside the 1e-3 allowance at desk-scale degrees
  const CliRun r = run({"verify", "--suite", "11"});
  CHECK(r.code == 1);
  CHECK(r.out.find("C11") != std::string::npos);
  CHECK(r.out.find("FAIL") != std::string::npos);
  CHECK(r.err.find("verification failed: [Thm 7.1]") != std::string::npos);
}

TEST_CASE("verify writes the report table on request") {
  const std::string path = "/tmp/pshlab_cli_test/verify.csv";
  std::filesystem::create_directories("/tmp/pshlab_cli_test");
  const CliRun r = run({"verify", "--suite", "1", "--out", path});
  REQUIRE(r.code == 0);
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto lines = lines_of(ss.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "check,tag,name,status,detail");
  const auto row = cells_of(lines[1]);
  CHECK(row[0] == "C01");
  CHECK(row[1] == "Sec 2");
  CHECK(row[2] == "classical-anchor");
  CHECK(row[3] == "PASS");
}

TEST_CASE("suites name their checks") {
  CHECK(suite_checks("all") == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9,
                                                10, 11});
  CHECK(suite_checks("core") == std::vector<int>{2, 3, 8, 9});
  CHECK(suite_checks("1,4,10") == std::vector<int>{1, 4, 10});
  CHECK_THROWS_AS(suite_checks("12"), std::invalid_argument);
  CHECK_THROWS_AS(suite_checks("1.5"), std::invalid_argument);

  const std::string line = check_line(
      {3, "Thm 2.1", "level-set-monotone-limit", true, "measured"});
  CHECK(line.find("C03") == 0);
  CHECK(line.find("Thm 2.1") != std::string::npos);
  CHECK(line.find("PASS") != std::string::npos);
  CHECK(line.find("measured") != std::string::npos);
}

TEST_CASE("identical invocations are byte-identical across worker counts") {
  const std::vector<std::string> args = {"probe", "--f", "affine 0.5 1",
                                         "--p", "1.5,2", "--t-grid",
                                         "0.9,0.99,0.999"};
  const CliRun first = run(args);
  const CliRun second = run(args);
  REQUIRE(first.code == 0);
  CHECK(first.out == second.out);

  ::setenv("PSHLAB_THREADS", "3", 1);
  const CliRun threaded = run(args);
  ::setenv("PSHLAB_THREADS", "1", 1);
  const CliRun serial = run(args);
  ::unsetenv("PSHLAB_THREADS");
  CHECK(threaded.out == first.out);
  CHECK(serial.out == first.out);

  ::setenv("PSHLAB_THREADS", "junk", 1);
  const CliRun bad = run(args);
  ::unsetenv("PSHLAB_THREADS");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("PSHLAB_THREADS") != std::string::npos);
}
