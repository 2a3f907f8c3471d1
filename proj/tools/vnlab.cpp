#include "vnlab/instances.hpp"
#include "vnlab/jsonio.hpp"
#include "vnlab/report.hpp"
#include "vnlab/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw vnlab::InvalidInputError("cannot open for writing: " + path);
    out << text;
}

int run_gen(const std::string& blocks, long k, unsigned long long seed,
            long functionals, const std::string& out_path) {
    vnlab::InstanceSpec spec;
    spec.seed = seed;
    spec.blocks = vnlab::InstanceSpec::parse_blocks(blocks);
    spec.k = static_cast<vnlab::Index>(k);
    spec.functional_count = static_cast<vnlab::Index>(functionals);
    spec.validate();

    const vnlab::Instance inst = vnlab::make_instance(spec);
    vnlab::save_instance(inst, out_path);
    std::cout << "wrote " << out_path << " (dim_G=" << inst.dim_G
              << ", k=" << inst.k << ", functionals=" << inst.functional_values.size()
              << ", seed=" << inst.seed << ")\n";
    return kExitPass;
}

void print_report(const vnlab::Report& report) {
    for (const auto& c : report.checks) {
        std::cout << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name
                  << "  value=" << vnlab::format_double(c.value)
                  << "  tol=" << vnlab::format_double(c.tolerance) << "\n";
    }
}

int run_verify(const std::vector<std::string>& paths, double tol, int samples,
               unsigned long long seed, const std::string& report_path) {
    vnlab::VerifyOptions opts;
    opts.tol.rel_eps = tol;
    opts.samples = samples;
    opts.sample_seed = seed;

    std::vector<vnlab::Report> reports;
    bool any_failed = false;

    auto flush_reports = [&]() {
        if (report_path.empty()) return;
        if (reports.size() == 1) {
            write_text(report_path, vnlab::report_to_json(reports.front()));
        } else {
            std::string text = "[\n";
            for (size_t i = 0; i < reports.size(); ++i) {
                if (i) text += ",\n";
                text += vnlab::report_to_json(reports[i]);
            }
            text += "]\n";
            write_text(report_path, text);
        }
    };

    for (const auto& path : paths) {
        vnlab::Report report;
        report.instance_path = path;
        report.tolerance = tol;
        report.samples = samples;
        try {
            const std::string bytes = vnlab::read_file_bytes(path);
            report.fingerprint = vnlab::fnv1a64_hex(bytes);
            const vnlab::Instance inst = vnlab::parse_instance(bytes, opts.tol);
            vnlab::Report result = vnlab::run_verification(inst, opts);
            result.instance_path = path;
            result.fingerprint = report.fingerprint;
            report = std::move(result);
        } catch (const vnlab::Error& e) {
            report.error = e.what();
            reports.push_back(report);
            flush_reports();
            std::cerr << "error: " << path << ": " << e.what() << "\n";
            return kExitInputError;
        }
        reports.push_back(report);
        std::cout << "instance " << path << " (" << report.fingerprint << ")\n";
        print_report(report);
        std::cout << (report.passed() ? "PASS" : "FAIL") << " " << path << "\n";
        if (!report.passed()) any_failed = true;
    }
    flush_reports();
    return any_failed ? kExitCheckFailed : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vnlab: a finite-dimensional laboratory for operator algebras, "
                 "their modules and intertwiner spaces"};
    app.require_subcommand(1);

    std::string blocks;
    long k = 1;
    unsigned long long seed = 0;
    long functionals = 1;
    std::string out_path;

    auto* gen = app.add_subcommand("gen", "generate a seeded instance file");
    gen->add_option("--blocks", blocks,
                    "block structure of the algebra, e.g. 2x1,1x2")
        ->required();
    gen->add_option("--k", k, "number of module generators");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--functionals", functionals, "number of random functionals");
    gen->add_option("--out", out_path, "output path")->required();

    std::vector<std::string> paths;
    double tol = 1e-9;
    int samples = 200;
    unsigned long long verify_seed = 1;
    std::string report_path;

    auto* verify = app.add_subcommand("verify", "verify an instance file end to end");
    verify->add_option("paths", paths, "instance files")->required();
    verify->add_option("--tol", tol, "relative tolerance")->envname("VNLAB_TOL");
    verify->add_option("--samples", samples, "norm lower-bound sample count");
    verify->add_option("--seed", verify_seed, "sampling seed");
    verify->add_option("--report", report_path, "write a JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return kExitInputError;
    }

    try {
        if (gen->parsed()) return run_gen(blocks, k, seed, functionals, out_path);
        return run_verify(paths, tol, samples, verify_seed, report_path);
    } catch (const vnlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
