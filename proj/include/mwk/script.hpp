#pragma once

#include <map>
#include <optional>

#include "mwk/chowwitt.hpp"

/**
 * A small line-oriented command language over the library:
 *
 *   field F5 = GF(5)                 field Q = QQ
 *   field K  = F5(t)
 *   ext E    = F5[x]/(x^2 - 2)       ext L = F3[x,y]/(x^2 + 1, y^2 - x - 1)
 *   elem a : KMW(2, K) = [t]*[t-1] + eta*[2]*[t]*[3]
 *   gw g : F5 = <1,-1> + 2*<2>       km s : KM(2, K) = {t, t-1}
 *   eval a                           equal a b
 *   invariants g
 *   residue a at (t) [as r]          specialize a at (t-1) [as r]
 *   transfer a from E with w [as r]
 *   reciprocity [t^2-2]*dt over GF(5)
 *   tdiv a on P1(K, -2) [as D]       tdiv a on A1(K) / on Spec(K, (t^2-2))
 *   tdeg D                           pb1 D [twist O(-2)]
 *   rules-suite [filter]
 *
 * Lines starting with '#' are comments. Declarations bind names; commands
 * produce results. `as NAME` binds a command's result for later use.
 */
namespace mwk {

/** Syntax or binding error, with 1-based source position. */
struct ScriptError : std::runtime_error {
    int line, col;
    ScriptError(const std::string& m, int line_, int col_)
        : std::runtime_error(m + " (line " + std::to_string(line_) + ", column " +
                             std::to_string(col_) + ")"),
          line(line_),
          col(col_) {}
};

enum class ErrorKind { None, Domain, Capability, Syntax };

struct CommandResult {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::string result;
    std::vector<std::pair<std::string, std::string>> invariants;
    std::vector<std::pair<std::string, std::string>> perPlace;
    ErrorKind error = ErrorKind::None;
};

struct RunOutput {
    std::vector<CommandResult> results;
    /** Worst error seen (capability > domain/syntax > none). */
    ErrorKind error = ErrorKind::None;
};

/** The interpreter state: bound names, reusable across lines (REPL). */
class Interpreter {
  public:
    /**
     * Executes one statement or command. Declarations return nothing;
     * commands return their result. Throws ScriptError on bad syntax;
     * DomainError/CapabilityError propagate from the library.
     */
    std::optional<CommandResult> execute_line(const std::string& text, int lineno = 1);

    struct Binding;

  private:
    std::map<std::string, std::shared_ptr<Binding>> env_;
    friend struct ScriptParser;
};

/** Runs a whole script; library errors become errored command results. */
RunOutput run_script(const std::string& text);

std::string render_text(const RunOutput& out);
std::string render_json(const RunOutput& out);

/** Process exit code for an output: 0 clean, 1 domain/syntax, 2 capability. */
int exit_code(const RunOutput& out);

}  // namespace mwk
