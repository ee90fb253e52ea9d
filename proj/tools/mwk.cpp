#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mwk/factor.hpp"
#include "mwk/script.hpp"
#include "mwk/suite.hpp"

namespace {

/** MWK_SEED (when set) overrides the default factorization seed. */
void apply_seed(const std::optional<unsigned long long>& flag) {
    if (flag) {
        mwk::set_factor_seed(*flag);
        return;
    }
    if (const char* env = std::getenv("MWK_SEED")) {
        try {
            mwk::set_factor_seed(std::stoull(env));
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric MWK_SEED\n";
        }
    }
}

int cmd_run(const std::string& path, bool json) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "mwk: cannot open script '" << path << "'\n";
        return 1;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    mwk::RunOutput out = mwk::run_script(buf.str());
    std::string text = json ? mwk::render_json(out) : mwk::render_text(out);
    if (!text.empty() && text.back() != '\n') text += '\n';
    std::cout << text;
    return mwk::exit_code(out);
}

int cmd_suite(const std::string& filter, bool quick) {
    auto results = mwk::run_suite(filter, quick);
    if (results.empty()) {
        std::cerr << "mwk: no criterion matches filter '" << filter << "'\n";
        return 1;
    }
    int bad = 0;
    for (const auto& r : results) {
        std::printf("[%s] %2d %-24s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL",
                    r.number, r.name.c_str(), r.seconds, r.detail.c_str());
        if (!r.pass) ++bad;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), bad);
    return bad ? 1 : 0;
}

int cmd_repl() {
    mwk::Interpreter interp;
    std::string line;
    int lineno = 0;
    std::cout << "mwk> " << std::flush;
    while (std::getline(std::cin, line)) {
        ++lineno;
        if (line == "quit" || line == "exit") break;
        try {
            auto res = interp.execute_line(line, lineno);
            if (res) {
                mwk::RunOutput one;
                one.results.push_back(*res);
                std::cout << mwk::render_text(one);
            }
        } catch (const mwk::ScriptError& e) {
            std::cout << "syntax error: " << e.what() << "\n";
        } catch (const mwk::CapabilityError& e) {
            std::cout << "capability error: " << e.what() << "\n";
        } catch (const mwk::DomainError& e) {
            std::cout << "domain error: " << e.what() << "\n";
        }
        std::cout << "mwk> " << std::flush;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mwk: exact Grothendieck-Witt / Milnor-Witt symbol calculator"};
    app.require_subcommand(1);

    std::string script_path;
    bool json = false;
    std::optional<unsigned long long> seed;
    auto* run = app.add_subcommand("run", "execute a .mwk script");
    run->add_option("script", script_path, "script file")->required();
    run->add_flag("--json", json, "emit JSON instead of text");
    run->add_option("--seed", seed, "factorization RNG seed");

    std::string filter;
    bool quick = false;
    auto* suite = app.add_subcommand("suite", "run the verification suite");
    suite->add_option("--filter", filter, "only criteria whose name contains this");
    suite->add_flag("--quick", quick, "smaller randomized instance counts");
    suite->add_option("--seed", seed, "factorization RNG seed");

    auto* repl = app.add_subcommand("repl", "interactive session");
    repl->add_option("--seed", seed, "factorization RNG seed");

    CLI11_PARSE(app, argc, argv);
    apply_seed(seed);

    if (run->parsed()) return cmd_run(script_path, json);
    if (suite->parsed()) return cmd_suite(filter, quick);
    return cmd_repl();
}
