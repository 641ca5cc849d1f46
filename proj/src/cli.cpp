#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nagp/errors.hpp"
#include "nagp/pathio.hpp"

namespace nagp {
namespace {

std::string read_file(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) {
        throw InputError("cannot read \"" + filename + "\"");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& filename, const std::string& content) {
    std::ofstream out(filename, std::ios::binary);
    if (!out) {
        throw InputError("cannot write \"" + filename + "\"");
    }
    out << content;
    if (!out) {
        throw InputError("cannot write \"" + filename + "\"");
    }
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::string& out,
            std::string& err) {
    CLI::App app{"two-photon linear-optics holonomy toolkit"};
    app.require_subcommand(1);

    std::string spec_file;
    double tol = 1e-10;
    std::string report_file;
    bool human = false;
    auto* holonomy_cmd = app.add_subcommand(
        "holonomy", "integrate the Wilson loop of a path spec");
    holonomy_cmd->add_option("spec-file", spec_file, "path-spec JSON file")
        ->required();
    holonomy_cmd->add_option("--tol", tol, "integrator tolerance");
    holonomy_cmd->add_option(
        "--report", report_file,
        "also write the structured report to this file");
    holonomy_cmd->add_flag("--human", human,
                           "print the aligned table instead of JSON");

    std::string matrix_file;
    auto* decompose_cmd = app.add_subcommand(
        "decompose", "Cartan factors of a 4x4 unitary matrix file");
    decompose_cmd->add_option("matrix-file", matrix_file, "matrix JSON file")
        ->required();

    std::string compile_file;
    auto* compile_cmd = app.add_subcommand(
        "compile", "phase-layer compilation of each segment generator");
    compile_cmd->add_option("spec-file", compile_file, "path-spec JSON file")
        ->required();

    double s2 = 2.0 * std::numbers::pi;
    std::string variant = "default";
    bool example_human = false;
    auto* example_cmd = app.add_subcommand(
        "example", "run the built-in reference triangle");
    example_cmd->add_option("--s2", s2, "middle-leg length");
    example_cmd->add_option("--variant", variant, "default or hv")
        ->check(CLI::IsMember({"default", "hv"}));
    example_cmd->add_flag("--human", example_human,
                          "print the aligned table instead of JSON");

    std::string sample_file;
    int n_samples = 0;
    auto* sample_cmd = app.add_subcommand(
        "sample", "CSV of the gauge potential along a path");
    sample_cmd->add_option("spec-file", sample_file, "path-spec JSON file")
        ->required();
    sample_cmd->add_option("--n", n_samples, "number of sample rows")
        ->required();

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("nagp");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(argv_storage.size());
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out += app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out += app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err += std::string(e.what()) + "\n";
        return 2;
    }

    try {
        if (*holonomy_cmd) {
            std::string text = read_file(spec_file);
            Path path = parse_path_spec(text);
            WilsonOptions opts;
            opts.tol = tol;
            RunReport report =
                run_holonomy(path, opts, fnv1a_digest(text));
            std::string structured =
                emit_report(report, ReportFormat::kStructured);
            if (!report_file.empty()) {
                write_file(report_file, structured);
            }
            out += human ? emit_report(report, ReportFormat::kHuman)
                         : structured;
        } else if (*decompose_cmd) {
            Matrix4cd m = parse_matrix_file(read_file(matrix_file));
            out += cartan_to_json(cartan_kpk(m));
        } else if (*compile_cmd) {
            Path path = parse_path_spec(read_file(compile_file));
            std::vector<CompiledSubgroup> blocks;
            blocks.reserve(path.segments().size());
            for (const PathSegment& seg : path.segments()) {
                blocks.push_back(compile_one_param(seg.generator));
            }
            out += compiled_to_json(blocks);
        } else if (*example_cmd) {
            Path path = preset_reference_triangle(s2, variant == "hv");
            std::string descriptor = "preset:reference-triangle variant:" +
                                     variant + " s2:" + fmt_double(s2);
            RunReport report = run_holonomy(path, WilsonOptions{},
                                            fnv1a_digest(descriptor));
            out += emit_report(report, example_human
                                           ? ReportFormat::kHuman
                                           : ReportFormat::kStructured);
        } else if (*sample_cmd) {
            Path path = parse_path_spec(read_file(sample_file));
            out += sample_gauge_potential_csv(path, n_samples);
        }
    } catch (const InputError& e) {
        err += std::string("input error: ") + e.what() + "\n";
        return 2;
    } catch (const NumericalError& e) {
        err += std::string("numerical error: ") + e.what() + "\n";
        return 3;
    } catch (const std::exception& e) {
        err += std::string("error: ") + e.what() + "\n";
        return 3;
    }
    return 0;
}

}  // namespace nagp
