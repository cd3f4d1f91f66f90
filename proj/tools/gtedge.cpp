#include <gtedge/combinatorics.hpp>
#include <gtedge/frontier.hpp>
#include <gtedge/kernel.hpp>
#include <gtedge/measure.hpp>
#include <gtedge/presets.hpp>
#include <gtedge/saddle.hpp>
#include <gtedge/verify.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

bool use_color() {
    return std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO);
}

void diagnose(const std::string& code, const std::string& message) {
    if (use_color())
        std::cerr << "\x1b[1;31merror\x1b[0m[" << code << "]: " << message << '\n';
    else
        std::cerr << "error[" << code << "]: " << message << '\n';
}

// Raised for failures outside the library's error codes (I/O).
struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoFailure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes the whole payload to a sibling temp file, then renames it over the
// destination so a failed run never leaves a partial file.
void emit(const std::string& payload, const std::string& out) {
    if (out.empty()) {
        std::cout << payload << std::flush;
        return;
    }
    namespace fs = std::filesystem;
    fs::path dest(out);
    fs::path tmp = dest;
    tmp += ".tmp." + std::to_string(getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw IoFailure("cannot write " + tmp.string());
        f << payload;
        f.close();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoFailure("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, dest, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoFailure("cannot rename onto " + dest.string());
    }
}

struct MeasureSource {
    std::string file;
    std::string preset;

    void attach(CLI::App* cmd) {
        auto* m = cmd->add_option("--measure", file, "Measure spec JSON file");
        auto* p = cmd->add_option("--preset", preset, "Preset name")->check(CLI::IsMember(gtedge::preset_names()));
        m->excludes(p);
        p->excludes(m);
    }

    gtedge::MeasureSpec load() const {
        if (!preset.empty())
            return gtedge::preset(preset).spec;
        if (file.empty())
            throw CLI::RequiredError("--measure or --preset");
        return gtedge::measure_from_json(read_file(file));
    }
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json point_json(const gtedge::EdgePoint& p) { return ordered_json::array({p.chi, p.eta}); }

const char* kind_name(gtedge::PointKind k) {
    switch (k) {
    case gtedge::PointKind::Tangency: return "tangency";
    case gtedge::PointKind::Edge: return "edge";
    case gtedge::PointKind::ProbeLimit: return "probe_limit";
    case gtedge::PointKind::Approximate: return "approximate";
    }
    return "?";
}

std::string preset_show(const gtedge::Preset& p) {
    ordered_json j;
    j["name"] = p.name;
    j["description"] = p.description;
    j["expected_complete"] = p.expected_complete;
    j["special_points"] = ordered_json::array();
    for (const auto& s : p.special_points) {
        ordered_json r;
        r["label"] = s.label;
        r["point"] = point_json(s.point);
        r["kind"] = kind_name(s.kind);
        r["t"] = s.t ? ordered_json(*s.t) : ordered_json(nullptr);
        r["case"] = s.expected_case;
        j["special_points"].push_back(std::move(r));
    }
    return j.dump() + "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Gelfand-Tsetlin kernels, liquid regions and edge curves"};
    app.require_subcommand(1, 1);

    std::string out;
    std::string format;
    std::uint64_t seed = 0;
    int budget = 512;

    auto add_out = [&](CLI::App* c) { c->add_option("--out", out, "Output file (default standard output)"); };

    MeasureSource src_frontier, src_classify, src_membership;

    auto* frontier = app.add_subcommand("frontier", "Sample the edge curve");
    src_frontier.attach(frontier);
    frontier->add_option("--budget", budget, "Polyline sample budget")->check(CLI::Range(16, 1 << 20));
    frontier->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    add_out(frontier);

    std::vector<double> ts;
    auto* classify = app.add_subcommand("classify", "Component, case and multiplicity at edge parameters");
    src_classify.attach(classify);
    classify->add_option("--t", ts, "Edge parameters")->required()->delimiter(',');
    classify->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    add_out(classify);

    double chi = 0.0, eta = 0.0;
    auto* membership = app.add_subcommand("membership", "Liquid-region membership of (chi, eta)");
    src_membership.attach(membership);
    membership->add_option("--chi", chi)->required();
    membership->add_option("--eta", eta)->required();
    membership->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    add_out(membership);

    std::vector<long> toprow;
    long u = 0, v = 0;
    int r = 0, s = 0;
    auto* kernel = app.add_subcommand("kernel", "Exact correlation kernel K(u, r; v, s)");
    kernel->add_option("--toprow", toprow, "Strictly decreasing top row")->required()->delimiter(',');
    kernel->add_option("--u", u)->required();
    kernel->add_option("--r", r)->required();
    kernel->add_option("--v", v)->required();
    kernel->add_option("--s", s)->required();
    add_out(kernel);

    auto* sample = app.add_subcommand("sample", "Exact uniform pattern sample");
    sample->add_option("--toprow", toprow, "Strictly decreasing top row")->required()->delimiter(',');
    sample->add_option("--seed", seed, "Sampler seed");
    sample->add_option("--format", format, "json or svg")->check(CLI::IsMember({"json", "svg"}));
    add_out(sample);

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "Run invariant suites");
    std::vector<std::string> suite_choices = gtedge::suite_names();
    suite_choices.push_back("all");
    verify->add_option("--suite", suite, "Suite name or all")->check(CLI::IsMember(suite_choices));
    add_out(verify);

    std::string preset_name;
    auto* preset = app.add_subcommand("preset", "Built-in measures");
    preset->require_subcommand(1, 1);
    auto* preset_list = preset->add_subcommand("list", "List preset names");
    auto* preset_show_cmd = preset->add_subcommand("show", "Description and special points");
    preset_show_cmd->add_option("name", preset_name)->required()->check(CLI::IsMember(gtedge::preset_names()));
    add_out(preset_show_cmd);
    auto* preset_export = preset->add_subcommand("export", "Measure spec JSON");
    preset_export->add_option("name", preset_name)->required()->check(CLI::IsMember(gtedge::preset_names()));
    add_out(preset_export);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (frontier->parsed()) {
            auto spec = src_frontier.load();
            if (format == "json")
                emit(gtedge::boundary_json(gtedge::assemble_boundary(spec, budget)), out);
            else
                emit(gtedge::edge_csv(gtedge::sample_edge(spec, budget)), out);
        } else if (classify->parsed()) {
            auto spec = src_classify.load();
            auto rd = gtedge::r_decomposition(spec);
            std::string payload;
            if (format == "json") {
                ordered_json j = ordered_json::array();
                for (double t : ts) {
                    auto c = gtedge::classify_case(spec, t);
                    auto p = gtedge::edge_point(spec, rd, t);
                    auto idx = rd.locate(t);
                    j.push_back({{"t", t},
                                 {"point", point_json(p)},
                                 {"component", gtedge::rtag_name(rd.components[*idx].tag)},
                                 {"case", c.edge_case},
                                 {"multiplicity", c.multiplicity}});
                }
                payload = j.dump() + "\n";
            } else {
                payload = "t,chi,eta,component,case,multiplicity\n";
                for (double t : ts) {
                    auto c = gtedge::classify_case(spec, t);
                    auto p = gtedge::edge_point(spec, rd, t);
                    auto idx = rd.locate(t);
                    payload += num(t) + ',' + num(p.chi) + ',' + num(p.eta) + ',' +
                               gtedge::rtag_name(rd.components[*idx].tag) + ',' + std::to_string(c.edge_case) + ',' +
                               std::to_string(c.multiplicity) + '\n';
                }
            }
            emit(payload, out);
        } else if (membership->parsed()) {
            auto spec = src_membership.load();
            gtedge::SaddleContext ctx(spec, chi, eta);
            auto m = gtedge::liquid_membership(ctx);
            if (format == "json") {
                ordered_json j;
                j["chi"] = chi;
                j["eta"] = eta;
                j["inside"] = m.inside;
                j["witness"] = m.witness ? ordered_json::array({m.witness->real(), m.witness->imag()})
                                         : ordered_json(nullptr);
                emit(j.dump() + "\n", out);
            } else {
                std::string row = num(chi) + ',' + num(eta) + ',' + (m.inside ? "true" : "false") + ',';
                row += m.witness ? num(m.witness->real()) + ',' + num(m.witness->imag()) : std::string(",");
                emit("chi,eta,inside,witness_re,witness_im\n" + row + '\n', out);
            }
        } else if (kernel->parsed()) {
            auto top = gtedge::make_top_row(toprow);
            gtedge::SiteCoord ur{u, r}, vs{v, s};
            emit(gtedge::kernel_json(top, ur, vs, gtedge::kernel(top, ur, vs)), out);
        } else if (sample->parsed()) {
            auto top = gtedge::make_top_row(toprow);
            auto p = gtedge::sample_pattern(top, seed);
            emit(format == "svg" ? gtedge::tiling_svg(gtedge::to_tiling(p)) : gtedge::pattern_to_json(p), out);
        } else if (verify->parsed()) {
            std::vector<std::string> names =
                suite == "all" ? gtedge::suite_names() : std::vector<std::string>{suite};
            std::string report;
            bool all_pass = true;
            for (const auto& name : names) {
                auto rep = gtedge::run_suite(name);
                for (const auto& c : rep.checks)
                    report += std::string(c.pass ? "PASS " : "FAIL ") + rep.suite + ": " + c.name + ": " + c.detail + '\n';
                all_pass = all_pass && rep.pass();
            }
            emit(report, out);
            return all_pass ? 0 : kExitDomain;
        } else if (preset->parsed()) {
            if (preset_list->parsed()) {
                std::string payload;
                for (const auto& n : gtedge::preset_names())
                    payload += n + '\t' + gtedge::preset(n).description + '\n';
                emit(payload, out);
            } else if (preset_show_cmd->parsed()) {
                emit(preset_show(gtedge::preset(preset_name)), out);
            } else {
                emit(gtedge::measure_to_json(gtedge::preset(preset_name).spec), out);
            }
        }
    } catch (const CLI::RequiredError& e) {
        diagnose("Usage", e.what());
        return kExitUsage;
    } catch (const gtedge::ValidationError& e) {
        for (const auto& issue : e.issues())
            diagnose(gtedge::errc_name(issue.code), issue.detail);
        return kExitDomain;
    } catch (const gtedge::Error& e) {
        std::string what = e.what();
        std::string prefix = std::string(gtedge::errc_name(e.code())) + ": ";
        if (what.rfind(prefix, 0) == 0)
            what = what.substr(prefix.size());
        diagnose(gtedge::errc_name(e.code()), what);
        return kExitDomain;
    } catch (const IoFailure& e) {
        diagnose("Io", e.what());
        return kExitDomain;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
