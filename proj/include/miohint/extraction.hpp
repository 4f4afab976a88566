#pragma once

#include <optional>
#include <string>
#include <vector>

#include "miohint/msl/program.hpp"
#include "miohint/target.hpp"

namespace miohint {

struct ChainEntry {
  msl::StatementRef ref;
  std::string text;       // verbatim statement text, or "formal = actual" for bindings
  bool synthetic_binding = false;

  friend bool operator==(const ChainEntry& a, const ChainEntry& b) {
    return a.ref == b.ref && a.text == b.text;
  }
};

// Insertion-ordered, duplicate-free chain of definition statements reaching
// the variables used at a target statement, including call-site parameter
// bindings up the caller chain.
struct DefUseChain {
  std::vector<ChainEntry> entries;
  std::vector<std::string> unresolved;  // free variables with no definition
  bool truncated = false;               // a cap stopped the analysis

  bool contains(const msl::StatementRef& ref, const std::string& text) const;
};

struct DefUseOptions {
  int caller_depth_cap = 8;
  int chain_size_cap = 64;
};

struct RelatedCode {
  Target target;
  std::string target_line_text;
  std::string enclosing_function_text;  // includes the doc-comment annotation
  DefUseChain def_use_chain;
  std::vector<std::string> called_function_defs;

  // Labeled-section rendering used as the prompt's context block.
  std::string to_text() const;
};

// Innermost function containing the statement. Throws NotInFunction when the
// location holds a top-level constant, TargetLineNotFound when it resolves
// to nothing at all.
const msl::FunctionDecl* find_enclosing_function(const msl::MslProgram& program,
                                                 const msl::StatementRef& ref);

// Def-use analysis: caller-chain parameter bindings first, then the
// backward walk over the variables used at the target statement. Terminates
// at request-field accesses and literals; duplicate entries are skipped;
// recursion through callers is cycle-guarded.
DefUseChain def_use_chain(const msl::MslProgram& program, const msl::StatementRef& ref,
                          const DefUseOptions& options = {});

// Full source text of every user-defined function invoked in the statement's
// expression; builtins excluded, deduplicated, in definition order.
std::vector<std::string> called_function_definitions(const msl::MslProgram& program,
                                                     const msl::StatementRef& ref);

RelatedCode extract_related_code(const msl::MslProgram& program, const Target& target,
                                 const DefUseOptions& options = {});

}  // namespace miohint
