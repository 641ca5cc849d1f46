#include "nagp/pathio.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "nagp/errors.hpp"

namespace nagp {
namespace {

using nlohmann::json;

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::pair<int, int> offset_position(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = offset_position(text, e.byte);
        throw SyntaxError(e.what(), line, col);
    }
}

void require_object(const json& node, const char* what) {
    if (!node.is_object()) {
        throw SyntaxError(std::string(what) + " must be an object");
    }
}

void reject_unknown_keys(const json& obj, const char* what,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed) {
            if (item.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw SyntaxError("unknown field \"" + item.key() + "\" in " +
                              what);
        }
    }
}

double number_field(const json& obj, const char* key, const char* what) {
    if (!obj.contains(key)) {
        throw SyntaxError(std::string(what) + " is missing \"" + key + "\"");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw SyntaxError(std::string("\"") + key + "\" in " + what +
                          " must be a number");
    }
    return v.get<double>();
}

json matrix_to_json(const Matrix4cd& m) {
    json a = json::array();
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            a.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    return a;
}

Matrix4cd matrix_from_json(const json& a, const char* what) {
    if (!a.is_array() || a.size() != 16) {
        throw SyntaxError(std::string(what) +
                          " must be an array of 16 [re, im] pairs");
    }
    Matrix4cd m;
    for (int k = 0; k < 16; ++k) {
        const json& e = a.at(k);
        if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() ||
            !e.at(1).is_number()) {
            throw SyntaxError(std::string(what) +
                              " entries must be [re, im] number pairs");
        }
        m(k / 4, k % 4) =
            std::complex<double>(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return m;
}

PathSegment parse_segment(const json& node, int index, double s_start) {
    std::string what = "segment " + std::to_string(index);
    require_object(node, what.c_str());
    reject_unknown_keys(node, what.c_str(),
                        {"generator", "generator_matrix", "length"});

    double length = number_field(node, "length", what.c_str());
    if (!std::isfinite(length) || length <= 0.0) {
        throw InvalidLength(what + " needs a finite positive length");
    }

    bool has_map = node.contains("generator");
    bool has_dense = node.contains("generator_matrix");
    if (has_map == has_dense) {
        throw SyntaxError(what +
                          " needs exactly one of \"generator\" and "
                          "\"generator_matrix\"");
    }

    PathSegment seg;
    seg.s_start = s_start;
    seg.s_end = s_start + length;
    if (has_map) {
        const json& gen = node.at("generator");
        require_object(gen, (what + " \"generator\"").c_str());
        for (const auto& item : gen.items()) {
            GeneratorLabel label = token_to_label(item.key());
            if (!item.value().is_number()) {
                throw SyntaxError("coefficient of \"" + item.key() + "\" in " +
                                  what + " must be a number");
            }
            double c = item.value().get<double>();
            if (!std::isfinite(c)) {
                throw SyntaxError("coefficient of \"" + item.key() + "\" in " +
                                  what + " must be finite");
            }
            seg.combo.set(label, c);
        }
        seg.generator = seg.combo.fundamental();
    } else {
        seg.generator = matrix_from_json(node.at("generator_matrix"),
                                         (what + " \"generator_matrix\"").c_str());
        if ((seg.generator - seg.generator.adjoint()).norm() > 1e-8) {
            throw NonHermitianInput(what + " generator matrix is not Hermitian");
        }
    }
    return seg;
}

Path parse_preset(const json& node) {
    require_object(node, "\"preset\"");
    reject_unknown_keys(node, "\"preset\"", {"name", "s2", "variant"});
    if (!node.contains("name") || !node.at("name").is_string()) {
        throw SyntaxError("\"preset\" needs a string \"name\"");
    }
    std::string name = node.at("name").get<std::string>();
    if (name != "reference-triangle") {
        throw SyntaxError("unknown preset \"" + name + "\"");
    }
    double s2 = 2.0 * std::numbers::pi;
    if (node.contains("s2")) {
        s2 = number_field(node, "s2", "\"preset\"");
        if (!std::isfinite(s2) || s2 < 0.0) {
            throw InvalidLength("preset \"s2\" must be finite and nonnegative");
        }
    }
    bool hv = false;
    if (node.contains("variant")) {
        if (!node.at("variant").is_string()) {
            throw SyntaxError("preset \"variant\" must be a string");
        }
        std::string variant = node.at("variant").get<std::string>();
        if (variant == "hv") {
            hv = true;
        } else if (variant != "default") {
            throw SyntaxError("unknown preset variant \"" + variant + "\"");
        }
    }
    return preset_reference_triangle(s2, hv);
}

const char* classification_name(Closing c) { return to_string(c); }

Closing classification_from_name(const std::string& s) {
    if (s == "StrictlyLocal") return Closing::kStrictlyLocal;
    if (s == "SwapTimesLocal") return Closing::kSwapTimesLocal;
    if (s == "NotClosing") return Closing::kNotClosing;
    throw SyntaxError("unknown classification \"" + s + "\"");
}

json euler_to_json(const EulerParamsLO& p) {
    return json{{"alpha_a", p.alpha_a}, {"beta_a", p.beta_a},
                {"gamma_a", p.gamma_a}, {"delta_a", p.delta_a},
                {"alpha_b", p.alpha_b}, {"beta_b", p.beta_b},
                {"gamma_b", p.gamma_b}, {"delta_b", p.delta_b}};
}

EulerParamsLO euler_from_json(const json& node) {
    require_object(node, "\"kbar\"");
    reject_unknown_keys(node, "\"kbar\"",
                        {"alpha_a", "beta_a", "gamma_a", "delta_a", "alpha_b",
                         "beta_b", "gamma_b", "delta_b"});
    EulerParamsLO p;
    p.alpha_a = number_field(node, "alpha_a", "\"kbar\"");
    p.beta_a = number_field(node, "beta_a", "\"kbar\"");
    p.gamma_a = number_field(node, "gamma_a", "\"kbar\"");
    p.delta_a = number_field(node, "delta_a", "\"kbar\"");
    p.alpha_b = number_field(node, "alpha_b", "\"kbar\"");
    p.beta_b = number_field(node, "beta_b", "\"kbar\"");
    p.gamma_b = number_field(node, "gamma_b", "\"kbar\"");
    p.delta_b = number_field(node, "delta_b", "\"kbar\"");
    return p;
}

json cartan_to_json_node(const CartanFactors& f) {
    return json{{"kbar", euler_to_json(f.kbar)},
                {"x_h", f.x_h},
                {"x_v", f.x_v},
                {"kprime", matrix_to_json(f.kprime)},
                {"degenerate_angles", f.degenerate_angles}};
}

CartanFactors cartan_from_json(const json& node) {
    require_object(node, "\"endpoint_cartan\"");
    reject_unknown_keys(node, "\"endpoint_cartan\"",
                        {"kbar", "x_h", "x_v", "kprime", "degenerate_angles"});
    CartanFactors f;
    if (!node.contains("kbar")) {
        throw SyntaxError("\"endpoint_cartan\" is missing \"kbar\"");
    }
    f.kbar = euler_from_json(node.at("kbar"));
    f.x_h = number_field(node, "x_h", "\"endpoint_cartan\"");
    f.x_v = number_field(node, "x_v", "\"endpoint_cartan\"");
    if (!node.contains("kprime")) {
        throw SyntaxError("\"endpoint_cartan\" is missing \"kprime\"");
    }
    f.kprime = matrix_from_json(node.at("kprime"), "\"kprime\"");
    if (!node.contains("degenerate_angles") ||
        !node.at("degenerate_angles").is_boolean()) {
        throw SyntaxError("\"endpoint_cartan\" needs boolean "
                          "\"degenerate_angles\"");
    }
    f.degenerate_angles = node.at("degenerate_angles").get<bool>();
    return f;
}

void append_matrix_rows(std::ostringstream& out, const Matrix4cd& m) {
    for (int r = 0; r < 4; ++r) {
        out << " ";
        for (int c = 0; c < 4; ++c) {
            out << " (" << fmt_double(m(r, c).real()) << ", "
                << fmt_double(m(r, c).imag()) << ")";
        }
        out << "\n";
    }
}

bool matrices_equal(const Matrix4cd& a, const Matrix4cd& b) {
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (a(r, c) != b(r, c)) return false;
        }
    }
    return true;
}

std::vector<std::pair<double, Matrix4cd>> midpoint_samples(const Path& path,
                                                           int n) {
    std::vector<std::pair<double, Matrix4cd>> rows;
    rows.reserve(n);
    double total = path.s_end();
    for (int k = 0; k < n; ++k) {
        double s = (double(k) + 0.5) * total / double(n);
        rows.emplace_back(s, gauge_potential(path, s));
    }
    return rows;
}

}  // namespace

Path parse_path_spec(const std::string& text) {
    json doc = parse_json(text);
    require_object(doc, "path spec");
    reject_unknown_keys(doc, "path spec", {"version", "segments", "preset"});

    if (!doc.contains("version") || !doc.at("version").is_number_integer() ||
        doc.at("version").get<int>() != 1) {
        throw SyntaxError("path spec needs \"version\": 1");
    }

    bool has_segments = doc.contains("segments");
    bool has_preset = doc.contains("preset");
    if (has_segments == has_preset) {
        throw SyntaxError(
            "path spec needs exactly one of \"segments\" and \"preset\"");
    }
    if (has_preset) {
        return parse_preset(doc.at("preset"));
    }

    const json& segs = doc.at("segments");
    if (!segs.is_array() || segs.empty()) {
        throw SyntaxError("\"segments\" must be a nonempty array");
    }
    std::vector<PathSegment> out;
    out.reserve(segs.size());
    double cursor = 0.0;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        out.push_back(parse_segment(segs.at(k), int(k), cursor));
        cursor = out.back().s_end;
    }
    return Path(std::move(out));
}

Path load_path_spec(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) {
        throw InputError("cannot read \"" + filename + "\"");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_path_spec(buf.str());
}

Path preset_reference_triangle(double s2_end, bool hv_variant) {
    double angle = hv_variant ? 0.0 : std::numbers::pi / 4.0;
    GeneratorCombo middle{{GeneratorLabel::kJay, 0.5},
                          {GeneratorLabel::kJby, 0.5}};
    return build_triangle_path(angle, angle, std::numbers::pi, middle, s2_end);
}

bool reports_equal(const RunReport& a, const RunReport& b) {
    return a.report_version == b.report_version &&
           a.input_digest == b.input_digest &&
           a.classification == b.classification &&
           matrices_equal(a.holonomy, b.holonomy) &&
           matrices_equal(a.total_fundamental, b.total_fundamental) &&
           matrices_equal(a.total_restricted, b.total_restricted) &&
           a.endpoint_cartan.kbar == b.endpoint_cartan.kbar &&
           a.endpoint_cartan.x_h == b.endpoint_cartan.x_h &&
           a.endpoint_cartan.x_v == b.endpoint_cartan.x_v &&
           matrices_equal(a.endpoint_cartan.kprime, b.endpoint_cartan.kprime) &&
           a.endpoint_cartan.degenerate_angles ==
               b.endpoint_cartan.degenerate_angles &&
           a.integrator.steps == b.integrator.steps &&
           a.integrator.residual == b.integrator.residual &&
           a.gauge_samples.size() == b.gauge_samples.size() &&
           [&] {
               for (std::size_t k = 0; k < a.gauge_samples.size(); ++k) {
                   if (a.gauge_samples[k].first != b.gauge_samples[k].first ||
                       !matrices_equal(a.gauge_samples[k].second,
                                       b.gauge_samples[k].second)) {
                       return false;
                   }
               }
               return true;
           }();
}

RunReport run_holonomy(const Path& path, const WilsonOptions& opts,
                       const std::string& digest, int n_gauge_samples) {
    RunReport r;
    r.input_digest = digest;
    Holonomy h = wilson_loop(path, opts);
    r.classification = h.classification;
    r.holonomy = h.matrix;
    r.integrator.steps = h.steps;
    r.integrator.residual = h.residual;
    TotalTransformation t = total_transformation(path);
    r.total_fundamental = path.endpoint();
    r.total_restricted = t.restricted;
    r.endpoint_cartan = cartan_kpk(path.endpoint());
    if (n_gauge_samples >= 2) {
        r.gauge_samples = midpoint_samples(path, n_gauge_samples);
    }
    return r;
}

std::string emit_report(const RunReport& report, ReportFormat format) {
    if (format == ReportFormat::kStructured) {
        json samples = json::array();
        for (const auto& [s, m] : report.gauge_samples) {
            samples.push_back(json{{"s", s}, {"matrix", matrix_to_json(m)}});
        }
        json doc{{"report_version", report.report_version},
                 {"input_digest", report.input_digest},
                 {"classification", classification_name(report.classification)},
                 {"holonomy", matrix_to_json(report.holonomy)},
                 {"total_fundamental", matrix_to_json(report.total_fundamental)},
                 {"total_restricted", matrix_to_json(report.total_restricted)},
                 {"endpoint_cartan", cartan_to_json_node(report.endpoint_cartan)},
                 {"integrator",
                  json{{"steps", report.integrator.steps},
                       {"residual", report.integrator.residual}}},
                 {"gauge_samples", samples}};
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "report_version      " << report.report_version << "\n";
    out << "input_digest        " << report.input_digest << "\n";
    out << "classification      " << classification_name(report.classification)
        << "\n";
    out << "integrator.steps    " << report.integrator.steps << "\n";
    out << "integrator.residual " << fmt_double(report.integrator.residual)
        << "\n";
    out << "holonomy\n";
    append_matrix_rows(out, report.holonomy);
    out << "total_fundamental\n";
    append_matrix_rows(out, report.total_fundamental);
    out << "total_restricted\n";
    append_matrix_rows(out, report.total_restricted);
    const CartanFactors& f = report.endpoint_cartan;
    out << "endpoint_cartan.x_h " << fmt_double(f.x_h) << "\n";
    out << "endpoint_cartan.x_v " << fmt_double(f.x_v) << "\n";
    out << "endpoint_cartan.degenerate_angles "
        << (f.degenerate_angles ? "true" : "false") << "\n";
    out << "endpoint_cartan.kbar";
    const double angles[8] = {f.kbar.alpha_a, f.kbar.beta_a, f.kbar.gamma_a,
                              f.kbar.delta_a, f.kbar.alpha_b, f.kbar.beta_b,
                              f.kbar.gamma_b, f.kbar.delta_b};
    for (double a : angles) out << " " << fmt_double(a);
    out << "\n";
    out << "endpoint_cartan.kprime\n";
    append_matrix_rows(out, f.kprime);
    for (const auto& [s, m] : report.gauge_samples) {
        out << "gauge_sample s = " << fmt_double(s) << "\n";
        append_matrix_rows(out, m);
    }
    return out.str();
}

RunReport parse_report(const std::string& text) {
    json doc = parse_json(text);
    require_object(doc, "report");
    reject_unknown_keys(doc, "report",
                        {"report_version", "input_digest", "classification",
                         "holonomy", "total_fundamental", "total_restricted",
                         "endpoint_cartan", "integrator", "gauge_samples"});
    RunReport r;
    if (!doc.contains("report_version") ||
        !doc.at("report_version").is_number_integer() ||
        doc.at("report_version").get<int>() != 1) {
        throw SyntaxError("report needs \"report_version\": 1");
    }
    if (!doc.contains("input_digest") || !doc.at("input_digest").is_string()) {
        throw SyntaxError("report needs string \"input_digest\"");
    }
    r.input_digest = doc.at("input_digest").get<std::string>();
    if (!doc.contains("classification") ||
        !doc.at("classification").is_string()) {
        throw SyntaxError("report needs string \"classification\"");
    }
    r.classification =
        classification_from_name(doc.at("classification").get<std::string>());
    for (const char* key : {"holonomy", "total_fundamental", "total_restricted",
                            "endpoint_cartan", "integrator", "gauge_samples"}) {
        if (!doc.contains(key)) {
            throw SyntaxError(std::string("report is missing \"") + key +
                              "\"");
        }
    }
    r.holonomy = matrix_from_json(doc.at("holonomy"), "\"holonomy\"");
    r.total_fundamental =
        matrix_from_json(doc.at("total_fundamental"), "\"total_fundamental\"");
    r.total_restricted =
        matrix_from_json(doc.at("total_restricted"), "\"total_restricted\"");
    r.endpoint_cartan = cartan_from_json(doc.at("endpoint_cartan"));
    const json& integ = doc.at("integrator");
    require_object(integ, "\"integrator\"");
    reject_unknown_keys(integ, "\"integrator\"", {"steps", "residual"});
    if (!integ.contains("steps") || !integ.at("steps").is_number_integer()) {
        throw SyntaxError("\"integrator\" needs integer \"steps\"");
    }
    r.integrator.steps = integ.at("steps").get<long>();
    r.integrator.residual = number_field(integ, "residual", "\"integrator\"");
    const json& samples = doc.at("gauge_samples");
    if (!samples.is_array()) {
        throw SyntaxError("\"gauge_samples\" must be an array");
    }
    for (const json& node : samples) {
        require_object(node, "gauge sample");
        reject_unknown_keys(node, "gauge sample", {"s", "matrix"});
        double s = number_field(node, "s", "gauge sample");
        if (!node.contains("matrix")) {
            throw SyntaxError("gauge sample is missing \"matrix\"");
        }
        r.gauge_samples.emplace_back(
            s, matrix_from_json(node.at("matrix"), "gauge sample \"matrix\""));
    }
    return r;
}

std::string sample_gauge_potential_csv(const Path& path, int n) {
    if (n < 2) {
        throw OutOfRange("sample count must be at least 2");
    }
    std::ostringstream out;
    out << "s";
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out << ",A" << r << c << "_re,A" << r << c << "_im";
        }
    }
    out << "\n";
    for (const auto& [s, m] : midpoint_samples(path, n)) {
        out << fmt_double(s);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                out << "," << fmt_double(m(r, c).real()) << ","
                    << fmt_double(m(r, c).imag());
            }
        }
        out << "\n";
    }
    return out.str();
}

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(hash));
    return buf;
}

std::string cartan_to_json(const CartanFactors& f) {
    return cartan_to_json_node(f).dump(2) + "\n";
}

std::string compiled_to_json(const std::vector<CompiledSubgroup>& blocks) {
    json arr = json::array();
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const CompiledSubgroup& b = blocks[k];
        json rotations = json::array();
        for (const TwoModeRotation& r : b.rotations) {
            json block = json::array();
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    block.push_back(json::array(
                        {r.block(i, j).real(), r.block(i, j).imag()}));
                }
            }
            rotations.push_back(json{{"lo", r.lo}, {"block", block}});
        }
        json phases = json::array();
        for (int i = 0; i < 4; ++i) {
            phases.push_back(json::array({b.phases(i).real(),
                                          b.phases(i).imag()}));
        }
        arr.push_back(json{{"segment", k},
                           {"eigenvalues",
                            json::array({b.c(0), b.c(1), b.c(2), b.c(3)})},
                           {"v", matrix_to_json(b.v)},
                           {"rotations", rotations},
                           {"phases", phases}});
    }
    return arr.dump(2) + "\n";
}

Matrix4cd parse_matrix_file(const std::string& text) {
    json doc = parse_json(text);
    require_object(doc, "matrix file");
    reject_unknown_keys(doc, "matrix file", {"matrix"});
    if (!doc.contains("matrix")) {
        throw SyntaxError("matrix file needs \"matrix\"");
    }
    return matrix_from_json(doc.at("matrix"), "\"matrix\"");
}

}  // namespace nagp
