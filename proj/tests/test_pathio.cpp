#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "nagp/errors.hpp"
#include "nagp/pathio.hpp"
#include "test_util.hpp"

using namespace nagp;
using testutil::haar_u4;
using testutil::uniform;

namespace {

constexpr double kPi = std::numbers::pi;

std::string write_temp(const std::string& stem, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / stem;
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    return path.string();
}

std::string matrix_json(const Matrix4cd& m) {
    std::string s = "[";
    for (int k = 0; k < 16; ++k) {
        char buf[80];
        std::snprintf(buf, sizeof(buf), "[%.17g,%.17g]", m(k / 4, k % 4).real(),
                      m(k / 4, k % 4).imag());
        if (k) s += ",";
        s += buf;
    }
    return s + "]";
}

RunReport random_report() {
    RunReport r;
    r.input_digest = fnv1a_digest(std::to_string(uniform(0.0, 1.0)));
    r.classification = Closing::kSwapTimesLocal;
    r.holonomy = haar_u4();
    r.total_fundamental = haar_u4();
    r.total_restricted = haar_u4();
    r.endpoint_cartan.kbar.alpha_a = uniform(0.0, 2.0 * kPi);
    r.endpoint_cartan.kbar.beta_a = uniform(0.0, kPi);
    r.endpoint_cartan.kbar.gamma_a = uniform(0.0, 4.0 * kPi);
    r.endpoint_cartan.kbar.delta_a = 0.1 + 0.2;  // not exactly representable
    r.endpoint_cartan.kbar.alpha_b = 1e-17;
    r.endpoint_cartan.kbar.beta_b = uniform(0.0, kPi);
    r.endpoint_cartan.x_h = uniform(0.0, kPi);
    r.endpoint_cartan.x_v = uniform(0.0, kPi);
    r.endpoint_cartan.kprime = haar_u4();
    r.endpoint_cartan.degenerate_angles = uniform(0.0, 1.0) > 0.5;
    r.integrator.steps = long(uniform(0.0, 1e6));
    r.integrator.residual = uniform(0.0, 1e-9);
    int samples = int(uniform(0.0, 3.0));
    for (int k = 0; k < samples; ++k) {
        r.gauge_samples.emplace_back(uniform(0.0, 10.0), Matrix4cd(haar_u4()));
    }
    return r;
}

int count_columns(const std::string& line) {
    int commas = 0;
    for (char c : line) {
        if (c == ',') ++commas;
    }
    return commas + 1;
}

}  // namespace

TEST_CASE("path spec: segment list with token and dense generators") {
    std::string text = R"({
      "version": 1,
      "segments": [
        {"generator": {"J_az": 1.0}, "length": 1.5},
        {"generator_matrix": )" +
                       matrix_json(generator_fundamental(
                           GeneratorLabel::kJHHx)) +
                       R"(, "length": 0.5}
      ]
    })";
    Path p = parse_path_spec(text);
    REQUIRE(p.segments().size() == 2);
    CHECK(p.s_end() == doctest::Approx(2.0));
    CHECK(p.segments()[0].combo.coefficient(GeneratorLabel::kJaz) == 1.0);
    CHECK(p.segments()[1].combo.is_zero());

    Matrix4cd expect =
        Matrix4cd(expm_hermitian(
            generator_fundamental(GeneratorLabel::kJHHx), 0.5)) *
        Matrix4cd(expm_hermitian(generator_fundamental(GeneratorLabel::kJaz),
                                 1.5));
    CHECK((p.endpoint() - expect).norm() <= 1e-13);
}

TEST_CASE("path spec: preset form equals the built-in construction") {
    std::string text = R"({"version": 1,
        "preset": {"name": "reference-triangle", "s2": 1.25,
                   "variant": "hv"}})";
    Path parsed = parse_path_spec(text);
    Path direct = preset_reference_triangle(1.25, true);
    REQUIRE(parsed.segments().size() == direct.segments().size());
    for (double s : {0.5, 2.0, 4.0, parsed.s_end()}) {
        CHECK((parsed.at(s) - direct.at(s)).norm() <= 1e-14);
    }
    // s2 defaults to the full turn.
    Path defaulted = parse_path_spec(
        R"({"version": 1, "preset": {"name": "reference-triangle"}})");
    CHECK(defaulted.s_end() ==
          doctest::Approx(preset_reference_triangle(2.0 * kPi).s_end()));
}

TEST_CASE("path spec: malformed documents carry positions and reasons") {
    CHECK_THROWS_AS(parse_path_spec("{"), SyntaxError);
    try {
        parse_path_spec("{\n  \"version\": 1,\n  \"segments\": [}");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line >= 1);
        CHECK(e.column >= 1);
    }

    CHECK_THROWS_AS(parse_path_spec("[1, 2]"), SyntaxError);
    CHECK_THROWS_AS(parse_path_spec(R"({"version": 2, "segments": []})"),
                    SyntaxError);
    CHECK_THROWS_AS(parse_path_spec(R"({"version": "1", "segments": []})"),
                    SyntaxError);
    CHECK_THROWS_AS(parse_path_spec(R"({"version": 1})"), SyntaxError);
    CHECK_THROWS_AS(parse_path_spec(R"({"version": 1, "segments": []})"),
                    SyntaxError);
    CHECK_THROWS_AS(
        parse_path_spec(
            R"({"version": 1, "segments": [], "preset": {"name": "x"}})"),
        SyntaxError);
    CHECK_THROWS_AS(
        parse_path_spec(R"({"version": 1, "segments": [{}], "extra": 0})"),
        SyntaxError);
}

TEST_CASE("path spec: segment-level validation") {
    auto spec = [](const std::string& body) {
        return R"({"version": 1, "segments": [)" + body + "]}";
    };

    CHECK_THROWS_AS(
        parse_path_spec(spec(R"({"generator": {"J_az": 1.0}})")),
        SyntaxError);  // missing length
    CHECK_THROWS_AS(
        parse_path_spec(spec(R"({"generator": {"J_az": 1.0}, "length": 0})")),
        InvalidLength);
    CHECK_THROWS_AS(
        parse_path_spec(spec(R"({"generator": {"J_az": 1.0}, "length": -2})")),
        InvalidLength);
    CHECK_THROWS_AS(parse_path_spec(spec(R"({"length": 1.0})")), SyntaxError);
    CHECK_THROWS_AS(
        parse_path_spec(spec(
            R"({"generator": {"J_az": 1}, "generator_matrix": [], "length": 1})")),
        SyntaxError);
    CHECK_THROWS_AS(
        parse_path_spec(spec(R"({"generator": {"J_qq": 1.0}, "length": 1})")),
        UnknownGenerator);
    CHECK_THROWS_AS(
        parse_path_spec(spec(
            R"({"generator": {"J_az": "big"}, "length": 1})")),
        SyntaxError);
    CHECK_THROWS_AS(
        parse_path_spec(spec(
            R"({"generator": {"J_az": 1.0}, "length": 1, "name": "leg"})")),
        SyntaxError);

    // A dense generator must be Hermitian.
    Matrix4cd skew = Matrix4cd::Zero();
    skew(0, 1) = 1.0;
    CHECK_THROWS_AS(
        parse_path_spec(spec(R"({"generator_matrix": )" + matrix_json(skew) +
                             R"(, "length": 1})")),
        NonHermitianInput);
}

TEST_CASE("path spec: preset validation") {
    CHECK_THROWS_AS(
        parse_path_spec(
            R"({"version": 1, "preset": {"name": "sideways-square"}})"),
        SyntaxError);
    CHECK_THROWS_AS(
        parse_path_spec(
            R"({"version": 1, "preset": {"name": "reference-triangle",
                "variant": "diagonal"}})"),
        SyntaxError);
    CHECK_THROWS_AS(
        parse_path_spec(
            R"({"version": 1, "preset": {"name": "reference-triangle",
                "s2": -1.0}})"),
        InvalidLength);
    CHECK_THROWS_AS(
        parse_path_spec(
            R"({"version": 1, "preset": {"name": "reference-triangle",
                "path": "short"}})"),
        SyntaxError);
}

TEST_CASE("load_path_spec reads files and reports unreadable ones") {
    std::string file = write_temp(
        "nagp_spec_load.json",
        R"({"version": 1, "segments": [{"generator": {"J_ay": 0.5},
            "length": 2.0}]})");
    Path p = load_path_spec(file);
    CHECK(p.s_end() == 2.0);
    CHECK_THROWS_AS(load_path_spec("/definitely/not/here.json"), InputError);
}

TEST_CASE("structured reports round trip exactly") {
    for (int t = 0; t < 100; ++t) {
        RunReport r = random_report();
        RunReport back = parse_report(emit_report(r, ReportFormat::kStructured));
        CHECK(reports_equal(r, back));
    }
}

TEST_CASE("structured report keys are emitted in sorted order") {
    RunReport r = random_report();
    std::string text = emit_report(r, ReportFormat::kStructured);
    const char* keys[] = {"\"classification\"",  "\"endpoint_cartan\"",
                          "\"gauge_samples\"",   "\"holonomy\"",
                          "\"input_digest\"",    "\"integrator\"",
                          "\"report_version\"",  "\"total_fundamental\"",
                          "\"total_restricted\""};
    std::size_t last = 0;
    for (const char* k : keys) {
        std::size_t pos = text.find(k);
        REQUIRE(pos != std::string::npos);
        CHECK(pos > last);
        last = pos;
    }
    CHECK(text.back() == '\n');
}

TEST_CASE("human report renders the same numbers as text") {
    RunReport r = random_report();
    r.integrator.residual = 0.125;
    r.endpoint_cartan.x_h = 1.5;
    std::string text = emit_report(r, ReportFormat::kHuman);
    CHECK(text.find("report_version      1") != std::string::npos);
    CHECK(text.find("integrator.residual 0.125") != std::string::npos);
    CHECK(text.find("endpoint_cartan.x_h 1.5") != std::string::npos);
    CHECK(text.find(r.input_digest) != std::string::npos);
    CHECK(text.find("SwapTimesLocal") != std::string::npos);
}

TEST_CASE("report parsing rejects structural damage") {
    RunReport r = random_report();
    std::string good = emit_report(r, ReportFormat::kStructured);

    CHECK_THROWS_AS(parse_report("[]"), SyntaxError);
    CHECK_THROWS_AS(parse_report("{}"), SyntaxError);

    std::string wrong_version = good;
    wrong_version.replace(wrong_version.find("\"report_version\": 1"),
                          std::string("\"report_version\": 1").size(),
                          "\"report_version\": 7");
    CHECK_THROWS_AS(parse_report(wrong_version), SyntaxError);

    std::string bad_class = good;
    bad_class.replace(bad_class.find("SwapTimesLocal"),
                      std::string("SwapTimesLocal").size(), "Sideways");
    CHECK_THROWS_AS(parse_report(bad_class), SyntaxError);

    std::string extra = good;
    extra.insert(extra.rfind('}'), ", \"unrelated\": 1");
    CHECK_THROWS_AS(parse_report(extra), SyntaxError);
}

TEST_CASE("run_holonomy fills the report from the pipeline") {
    Path p = preset_reference_triangle(kPi);
    RunReport r = run_holonomy(p, WilsonOptions{}, "fnv1a:0000000000000000", 4);
    CHECK(r.classification == Closing::kSwapTimesLocal);
    CHECK((r.holonomy - nagp_example_closed_form(kPi)).norm() <= 1e-10);
    CHECK((r.total_fundamental - p.endpoint()).norm() == 0.0);
    REQUIRE(r.gauge_samples.size() == 4);
    double total = p.s_end();
    for (int k = 0; k < 4; ++k) {
        CHECK(r.gauge_samples[k].first ==
              doctest::Approx((k + 0.5) * total / 4.0));
        CHECK((r.gauge_samples[k].second -
               gauge_potential(p, r.gauge_samples[k].first))
                  .norm() <= 1e-14);
    }
}

TEST_CASE("gauge-potential CSV: shape, separators, and values") {
    GeneratorCombo jz{{GeneratorLabel::kJaz, 1.0}};
    Path p({PathSegment{jz, jz.fundamental(), 0.0, 2.0}});
    std::string csv = sample_gauge_potential_csv(p, 4);

    CHECK(csv.find('\r') == std::string::npos);
    std::vector<std::string> lines;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 5);
    for (const std::string& l : lines) CHECK(count_columns(l) == 33);
    CHECK(lines[0].substr(0, 8) == "s,A00_re");

    // First sample sits at the midpoint of the first quarter; the fields
    // reproduce the potential there.
    CHECK(lines[1].substr(0, 5) == "0.25,");
    std::vector<double> fields;
    std::istringstream row(lines[1]);
    std::string cell;
    while (std::getline(row, cell, ',')) fields.push_back(std::stod(cell));
    REQUIRE(fields.size() == 33);
    Matrix4cd a = gauge_potential(p, 0.25);
    for (int k = 0; k < 16; ++k) {
        CHECK(fields[1 + 2 * k] == a(k / 4, k % 4).real());
        CHECK(fields[2 + 2 * k] == a(k / 4, k % 4).imag());
    }
    CHECK(std::abs(fields[1] + 0.5) <= 1e-13);

    CHECK_THROWS_AS(sample_gauge_potential_csv(p, 1), OutOfRange);
    CHECK_THROWS_AS(sample_gauge_potential_csv(p, 0), OutOfRange);
}

TEST_CASE("fnv1a digest matches the published vectors") {
    CHECK(fnv1a_digest("") == "fnv1a:cbf29ce484222325");
    CHECK(fnv1a_digest("foobar") == "fnv1a:85944171f73967e8");
    CHECK(fnv1a_digest(std::string(1, '\0')) != fnv1a_digest(""));
}

TEST_CASE("matrix files round trip through the decompose input parser") {
    Matrix4cd m = haar_u4();
    Matrix4cd back = parse_matrix_file(R"({"matrix": )" + matrix_json(m) + "}");
    CHECK((back - m).norm() == 0.0);

    CHECK_THROWS_AS(parse_matrix_file(R"({"matrix": [[1, 0]]})"), SyntaxError);
    CHECK_THROWS_AS(parse_matrix_file(R"({"matrix": 5})"), SyntaxError);
    CHECK_THROWS_AS(parse_matrix_file(R"({"m": []})"), SyntaxError);
    CHECK_THROWS_AS(parse_matrix_file("{}"), SyntaxError);
}

TEST_CASE("cartan and compile serializers emit well-formed JSON") {
    CartanFactors f = cartan_kpk(haar_u4());
    std::string cj = cartan_to_json(f);
    CHECK(cj.find("\"kbar\"") != std::string::npos);
    CHECK(cj.find("\"x_h\"") != std::string::npos);
    CHECK(cj.find("\"degenerate_angles\"") != std::string::npos);

    std::vector<CompiledSubgroup> blocks;
    blocks.push_back(
        compile_one_param(generator_fundamental(GeneratorLabel::kJay)));
    std::string sj = compiled_to_json(blocks);
    CHECK(sj.find("\"eigenvalues\"") != std::string::npos);
    CHECK(sj.find("\"rotations\"") != std::string::npos);
    CHECK(sj.find("\"segment\": 0") != std::string::npos);
}

TEST_CASE("cli: example subcommand reproduces the closed form") {
    std::string out, err;
    int code = run_cli({"example", "--s2", "6.283185307179586"}, out, err);
    REQUIRE(code == 0);
    CHECK(err.empty());
    RunReport r = parse_report(out);
    CHECK((r.holonomy - nagp_example_closed_form(2.0 * kPi)).norm() <= 1e-8);
    CHECK(r.classification == Closing::kSwapTimesLocal);
    CHECK(r.input_digest ==
          fnv1a_digest("preset:reference-triangle variant:default "
                       "s2:6.2831853071795862"));

    out.clear();
    code = run_cli({"example", "--variant", "hv", "--s2", "3.14"}, out, err);
    REQUIRE(code == 0);
    CHECK(parse_report(out).classification == Closing::kStrictlyLocal);

    out.clear();
    code = run_cli({"example", "--human"}, out, err);
    REQUIRE(code == 0);
    CHECK(out.find("classification      SwapTimesLocal") != std::string::npos);
}

TEST_CASE("cli: holonomy subcommand reads a spec and writes reports") {
    std::string spec = R"({"version": 1,
        "preset": {"name": "reference-triangle", "s2": 3.1}})";
    std::string spec_file = write_temp("nagp_cli_spec.json", spec);
    auto report_file =
        std::filesystem::temp_directory_path() / "nagp_cli_report.json";
    std::filesystem::remove(report_file);

    std::string out, err;
    int code = run_cli(
        {"holonomy", spec_file, "--report", report_file.string()}, out, err);
    REQUIRE(code == 0);
    RunReport r = parse_report(out);
    CHECK(r.input_digest == fnv1a_digest(spec));
    CHECK((r.holonomy - nagp_example_closed_form(3.1)).norm() <= 1e-8);

    std::ifstream in(report_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == out);

    // The human flag switches the stream format, not the file format.
    out.clear();
    code = run_cli({"holonomy", spec_file, "--human"}, out, err);
    REQUIRE(code == 0);
    CHECK(out.find("input_digest") != std::string::npos);
    CHECK(out.find('{') == std::string::npos);
}

TEST_CASE("cli: decompose, compile, and sample run end to end") {
    std::string matrix_file = write_temp(
        "nagp_cli_matrix.json", R"({"matrix": )" + matrix_json(haar_u4()) + "}");
    std::string out, err;
    REQUIRE(run_cli({"decompose", matrix_file}, out, err) == 0);
    CHECK(out.find("\"kbar\"") != std::string::npos);

    std::string spec_file = write_temp(
        "nagp_cli_compile.json",
        R"({"version": 1, "segments": [
            {"generator": {"J_az": 1.0}, "length": 1.0},
            {"generator": {"J_HHx": 0.5, "J_VVx": 0.5}, "length": 2.0}]})");
    out.clear();
    REQUIRE(run_cli({"compile", spec_file}, out, err) == 0);
    CHECK(out.find("\"segment\": 1") != std::string::npos);

    out.clear();
    REQUIRE(run_cli({"sample", spec_file, "--n", "6"}, out, err) == 0);
    std::istringstream in(out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 7);
}

TEST_CASE("cli: failures map to distinct exit codes") {
    std::string out, err;

    CHECK(run_cli({"holonomy", "/missing/file.json"}, out, err) == 2);
    CHECK(err.find("input error") != std::string::npos);

    // An endpoint that transfers photons between channels cannot close.
    std::string open_file = write_temp(
        "nagp_cli_open.json",
        R"({"version": 1, "segments": [
            {"generator": {"J_HHx": 1.0}, "length": 0.9}]})");
    err.clear();
    CHECK(run_cli({"holonomy", open_file}, out, err) == 3);
    CHECK(err.find("numerical error") != std::string::npos);

    err.clear();
    CHECK(run_cli({"sample", open_file, "--n", "1"}, out, err) == 2);

    err.clear();
    CHECK(run_cli({"example", "--s2", "-2.0"}, out, err) == 2);

    err.clear();
    CHECK(run_cli({"example", "--variant", "sideways"}, out, err) == 2);

    err.clear();
    CHECK(run_cli({"frobnicate"}, out, err) == 2);
    CHECK(run_cli({}, out, err) == 2);
}

TEST_CASE("cli: help is served on request") {
    std::string out, err;
    CHECK(run_cli({"--help"}, out, err) == 0);
    CHECK(out.find("holonomy") != std::string::npos);
    CHECK(out.find("example") != std::string::npos);
}
