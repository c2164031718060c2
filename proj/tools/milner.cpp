// milner: command-line front end.
//
//   milner compare <sim|simeq|bisim|trace> X Y [--format text|json] [--cap N]
//   milner lts X [--format dot|json] [--cap N]
//   milner axioms [--seed S] [--instances N] [--max-size M] [--only NAME]... [--format text|json] [--report FILE]
//   milner interpret X (--std | --interp FILE) [--bound K]
//   milner selftest [--seed S] [--scale F]
//
// Exit codes: 0 holds / passes, 1 fails, 2 usage or resource error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "milner/battery.hpp"
#include "milner/relations.hpp"
#include "milner/report.hpp"
#include "milner/semantics.hpp"
#include "milner/syntax.hpp"
#include "milner/trees.hpp"
#include "milner/wka.hpp"

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kError = 2;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("MILNER_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring malformed MILNER_SEED\n";
        }
    }
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

int emit(const std::string& text, int code) {
    std::cout << text << std::flush;
    return code;
}

struct CompareArgs {
    std::string relation, left, right, format = "text";
    std::size_t cap = milner::kDefaultStateCap;
};

int run_compare(const CompareArgs& a) {
    auto kind = milner::compare_kind(a.relation);
    if (!kind) {
        std::cerr << "error: unknown relation '" << a.relation << "' (expected sim, simeq, bisim or trace)\n";
        return kError;
    }
    milner::Regex x = milner::parse(a.left), y = milner::parse(a.right);
    milner::json rep = milner::compare_report(*kind, x, y, a.cap);
    int code = rep["verdict"].get<bool>() ? kHolds : kFails;
    return emit(a.format == "json" ? rep.dump(2) + "\n" : milner::compare_text(rep), code);
}

struct LtsArgs {
    std::string expr, format = "dot";
    std::size_t cap = milner::kDefaultStateCap;
};

int run_lts(const LtsArgs& a) {
    milner::Lts lts = milner::explore(milner::parse(a.expr), a.cap);
    return emit(a.format == "json" ? milner::lts_json(lts).dump(2) + "\n" : milner::to_dot(lts), kHolds);
}

struct AxiomArgs {
    std::optional<std::uint64_t> seed;
    std::size_t instances = 1000, max_size = 12;
    std::string alphabet = "abc";
    double star_probability = 0.2;
    std::vector<std::string> only;
    std::string format = "text", report;
    std::size_t cap = milner::kDefaultStateCap;
};

int run_axioms(const AxiomArgs& a) {
    milner::wka::SuiteConfig cfg;
    cfg.gen.seed = a.seed ? *a.seed : default_seed();
    cfg.gen.max_size = a.max_size;
    cfg.gen.alphabet = a.alphabet;
    cfg.gen.star_probability = a.star_probability;
    cfg.instances_per_schema = a.instances;
    cfg.state_cap = a.cap;
    for (const std::string& name : a.only) {
        auto id = milner::wka::schema_by_name(name);
        if (!id) {
            std::cerr << "error: unknown schema '" << name << "'\n";
            return kError;
        }
        cfg.only.push_back(*id);
    }
    milner::wka::SuiteReport rep = milner::wka::run_suite(cfg);
    milner::json j = milner::wka::suite_json(rep);
    if (!a.report.empty()) {
        std::ofstream out(a.report);
        if (!out) {
            std::cerr << "error: cannot write " << a.report << "\n";
            return kError;
        }
        out << j.dump(2) << "\n";
    }
    return emit(a.format == "json" ? j.dump(2) + "\n" : milner::wka::suite_table(rep), rep.ok() ? kHolds : kFails);
}

struct InterpretArgs {
    std::string expr, file;
    bool standard = false;
    std::size_t bound = 6;
};

int run_interpret(const InterpretArgs& a) {
    milner::Regex x = milner::parse(a.expr);
    milner::trees::Interpretation I;
    if (a.standard) {
        const milner::Regex roots[] = {x};
        I = milner::trees::standard_interpretation(milner::letters_of(roots));
    } else {
        std::ifstream in(a.file);
        if (!in) {
            std::cerr << "error: cannot read " << a.file << "\n";
            return kError;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        I = milner::trees::parse_interpretation(buf.str());
    }
    return emit(milner::trees::to_sexpr_lines(milner::trees::interpret(I, x, a.bound)), kHolds);
}

struct SelftestArgs {
    std::optional<std::uint64_t> seed;
    double scale = 1.0;
};

int run_selftest(const SelftestArgs& a) {
    std::uint64_t seed = a.seed ? *a.seed : default_seed();
    auto results = milner::battery::run_all(seed, a.scale);
    std::ostringstream out;
    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.passed;
        char timing[32];
        std::snprintf(timing, sizeof timing, "%8.2fs", r.seconds);
        out << (r.passed ? "PASS " : "FAIL ") << timing << "  " << r.name << ": " << r.detail << "\n";
    }
    out << "seed " << seed << ": " << (ok ? "all checks passed" : "FAILED") << "\n";
    return emit(out.str(), ok ? kHolds : kFails);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Process semantics of regular expressions: simulation, axioms, tree interpretations"};
    app.require_subcommand(1);

    CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "Decide a relation between two expressions");
    compare->add_option("relation", cmp.relation, "sim | simeq | bisim | trace")->required();
    compare->add_option("left", cmp.left, "left expression")->required();
    compare->add_option("right", cmp.right, "right expression")->required();
    compare->add_option("--format", cmp.format)->check(CLI::IsMember({"text", "json"}));
    compare->add_option("--cap", cmp.cap, "state cap")->check(CLI::PositiveNumber);

    LtsArgs lts;
    auto* lts_cmd = app.add_subcommand("lts", "Explore an expression into its transition system");
    lts_cmd->add_option("expr", lts.expr)->required();
    lts_cmd->add_option("--format", lts.format)->check(CLI::IsMember({"dot", "json"}));
    lts_cmd->add_option("--cap", lts.cap, "state cap")->check(CLI::PositiveNumber);

    AxiomArgs ax;
    auto* axioms = app.add_subcommand("axioms", "Randomized soundness suite for the axiom schemas");
    axioms->add_option("--seed", ax.seed);
    axioms->add_option("--instances", ax.instances, "instances per schema")->check(CLI::PositiveNumber);
    axioms->add_option("--max-size", ax.max_size, "maximum generated expression size")->check(CLI::PositiveNumber);
    axioms->add_option("--alphabet", ax.alphabet);
    axioms->add_option("--star-probability", ax.star_probability)->check(CLI::Range(0.0, 1.0));
    axioms->add_option("--only", ax.only, "restrict to the named schema (repeatable)");
    axioms->add_option("--format", ax.format)->check(CLI::IsMember({"text", "json"}));
    axioms->add_option("--report", ax.report, "also write the JSON report to this file");
    axioms->add_option("--cap", ax.cap, "state cap")->check(CLI::PositiveNumber);

    InterpretArgs in;
    auto* interpret = app.add_subcommand("interpret", "List the bounded tree language of an expression");
    interpret->add_option("expr", in.expr)->required();
    auto* std_flag = interpret->add_flag("--std", in.standard, "standard interpretation a -> {a(*)}");
    auto* file_opt = interpret->add_option("--interp", in.file, "interpretation file");
    std_flag->excludes(file_opt);
    interpret->add_option("--bound,-k", in.bound, "node-count bound")->check(CLI::PositiveNumber);

    SelftestArgs st;
    auto* selftest = app.add_subcommand("selftest", "Run the full property battery");
    selftest->add_option("--seed", st.seed);
    selftest->add_option("--scale", st.scale, "sample-count multiplier")->check(CLI::Range(0.001, 100.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (*compare) return run_compare(cmp);
        if (*lts_cmd) return run_lts(lts);
        if (*axioms) return run_axioms(ax);
        if (*interpret) {
            if (!in.standard && in.file.empty()) {
                std::cerr << "error: interpret needs --std or --interp FILE\n";
                return kError;
            }
            return run_interpret(in);
        }
        if (*selftest) return run_selftest(st);
    } catch (const milner::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const milner::StateSpaceExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const milner::trees::FormatError& e) {
        std::cerr << "error: interpretation file: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kError;
}
