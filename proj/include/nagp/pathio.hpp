#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nagp/decompose.hpp"
#include "nagp/holonomy.hpp"

namespace nagp {

// Path-spec documents are JSON:
//   {"version": 1, "segments": [{"generator": {"J_HHx": 0.5, ...},
//                                "length": 3.14}, ...]}
// A segment may give "generator_matrix" (16 row-major [re, im] pairs of a
// Hermitian 4x4) instead of the token map. Alternatively the document may
// name a preset:
//   {"version": 1, "preset": {"name": "reference-triangle",
//                             "s2": 6.283..., "variant": "hv"}}
// Unknown fields are rejected; parse errors carry line and column.
Path parse_path_spec(const std::string& text);
Path load_path_spec(const std::string& filename);

// The built-in three-leg cycle behind the "reference-triangle" preset and
// the `example` subcommand. The default variant mixes both polarizations
// on the outer legs (theta = phi = pi/4, s1 = s3 = pi); the "hv" variant
// leaves them unmixed (theta = phi = 0, closure lengths from
// solve_closure). Middle-leg generator is (J_ay + J_by)/2 in both.
Path preset_reference_triangle(double s2_end, bool hv_variant = false);

struct IntegratorStats {
    long steps = 0;
    double residual = 0.0;
};

struct RunReport {
    int report_version = 1;
    std::string input_digest;
    Closing classification = Closing::kNotClosing;
    Matrix4cd holonomy = Matrix4cd::Identity();
    Matrix4cd total_fundamental = Matrix4cd::Identity();
    Matrix4cd total_restricted = Matrix4cd::Identity();
    CartanFactors endpoint_cartan;
    IntegratorStats integrator;
    // Optional (s, A(s)) samples; empty when not requested.
    std::vector<std::pair<double, Matrix4cd>> gauge_samples;
};

bool reports_equal(const RunReport& a, const RunReport& b);

// Full pipeline for one path: Wilson loop, endpoint data, endpoint Cartan
// factors. digest should identify the input bytes (see fnv1a_digest).
RunReport run_holonomy(const Path& path, const WilsonOptions& opts,
                       const std::string& digest, int n_gauge_samples = 0);

enum class ReportFormat { kStructured, kHuman };

// kStructured is JSON with stable keys and lossless doubles; kHuman is an
// aligned table. Both carry identical numeric content;
// parse_report(emit_report(r, kStructured)) reproduces r exactly.
std::string emit_report(const RunReport& report, ReportFormat format);
RunReport parse_report(const std::string& text);

// CSV of the gauge potential at the midpoints of n equal parameter slices:
// header, then one row per sample with s and the 16 entries of A(s) as
// re/im columns. LF line endings, '.' decimal point.
std::string sample_gauge_potential_csv(const Path& path, int n);

// FNV-1a 64-bit digest, rendered "fnv1a:<16 hex digits>".
std::string fnv1a_digest(const std::string& bytes);

// Serializers shared with the `decompose` and `compile` subcommands.
std::string cartan_to_json(const CartanFactors& f);
std::string compiled_to_json(const std::vector<CompiledSubgroup>& blocks);

// Matrix-file format for `decompose`: {"matrix": [[re, im] x 16]} row-major.
Matrix4cd parse_matrix_file(const std::string& text);

// Shared by the CLI and tests: run one subcommand line, writing to the
// given streams. Returns the process exit code (0 ok, 2 input error,
// 3 numerical failure).
int run_cli(const std::vector<std::string>& args, std::string& out,
            std::string& err);

}  // namespace nagp
