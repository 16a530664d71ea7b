#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace htnr {

struct SourceSpan {
    std::string file;
    int line = 0;
    int column = 0;

    std::string str() const;
};

// Error code vocabulary shared by the reader and the domain-level parsers.
enum class ParseCode {
    SyntaxError,
    ArityMismatch,
    DuplicateName,
    UndeclaredPredicate,
    MethodHeadNotCompound,
    UngroundedInit,
    UnknownTask,
    NotAPartition,
    UnknownSymbol,
    BadStructure,
};

const char* to_string(ParseCode c);

class ParseError : public std::runtime_error {
public:
    ParseError(ParseCode code, SourceSpan span, const std::string& message);
    ParseCode code() const { return code_; }
    const SourceSpan& span() const { return span_; }

private:
    ParseCode code_;
    SourceSpan span_;
};

// One node of an s-expression tree: either an atom token or a list.
struct SExpr {
    enum class Kind { Atom, List };
    Kind kind = Kind::Atom;
    std::string token;        // Kind::Atom
    std::vector<SExpr> items; // Kind::List
    SourceSpan span;

    bool is_atom() const { return kind == Kind::Atom; }
    bool is_list() const { return kind == Kind::List; }

    // List whose first element is the given keyword atom.
    bool headed(std::string_view kw) const;
    const SExpr& at(size_t i) const;
    size_t size() const { return items.size(); }
};

// Parses a whole file (sequence of whitespace/comment separated forms); `;`
// starts a line comment. Tokens are [^()\s;]+.
std::vector<SExpr> read_sexprs(std::string_view text, const std::string& filename);

// Convenience: exactly one top-level form is expected.
SExpr read_one_sexpr(std::string_view text, const std::string& filename);

}  // namespace htnr
