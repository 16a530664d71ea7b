#include "htnr/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace htnr {

std::string SourceSpan::str() const {
    std::ostringstream os;
    os << (file.empty() ? "<input>" : file) << ':' << line << ':' << column;
    return os.str();
}

const char* to_string(ParseCode c) {
    switch (c) {
        case ParseCode::SyntaxError: return "SyntaxError";
        case ParseCode::ArityMismatch: return "ArityMismatch";
        case ParseCode::DuplicateName: return "DuplicateName";
        case ParseCode::UndeclaredPredicate: return "UndeclaredPredicate";
        case ParseCode::MethodHeadNotCompound: return "MethodHeadNotCompound";
        case ParseCode::UngroundedInit: return "UngroundedInit";
        case ParseCode::UnknownTask: return "UnknownTask";
        case ParseCode::NotAPartition: return "NotAPartition";
        case ParseCode::UnknownSymbol: return "UnknownSymbol";
        case ParseCode::BadStructure: return "BadStructure";
    }
    return "ParseError";
}

ParseError::ParseError(ParseCode code, SourceSpan span, const std::string& message)
    : std::runtime_error(span.str() + ": " + to_string(code) + ": " + message),
      code_(code),
      span_(std::move(span)) {}

bool SExpr::headed(std::string_view kw) const {
    return is_list() && !items.empty() && items[0].is_atom() && items[0].token == kw;
}

const SExpr& SExpr::at(size_t i) const {
    if (i >= items.size())
        throw ParseError(ParseCode::BadStructure, span, "missing element in form");
    return items[i];
}

namespace {

class Reader {
public:
    Reader(std::string_view text, std::string filename)
        : text_(text), file_(std::move(filename)) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        skip_ws();
        while (pos_ < text_.size()) {
            out.push_back(read_form());
            skip_ws();
        }
        return out;
    }

private:
    SourceSpan here() const { return SourceSpan{file_, line_, col_}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read_form() {
        SourceSpan span = here();
        char c = text_[pos_];
        if (c == '(') {
            advance();
            SExpr list;
            list.kind = SExpr::Kind::List;
            list.span = span;
            skip_ws();
            while (true) {
                if (pos_ >= text_.size())
                    throw ParseError(ParseCode::SyntaxError, span, "unterminated list");
                if (text_[pos_] == ')') {
                    advance();
                    return list;
                }
                list.items.push_back(read_form());
                skip_ws();
            }
        }
        if (c == ')') throw ParseError(ParseCode::SyntaxError, span, "unbalanced ')'");
        SExpr atom;
        atom.kind = SExpr::Kind::Atom;
        atom.span = span;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d)))
                break;
            atom.token.push_back(d);
            advance();
        }
        return atom;
    }

    std::string_view text_;
    std::string file_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text, const std::string& filename) {
    return Reader(text, filename).read_all();
}

SExpr read_one_sexpr(std::string_view text, const std::string& filename) {
    auto forms = read_sexprs(text, filename);
    if (forms.size() != 1)
        throw ParseError(ParseCode::SyntaxError, SourceSpan{filename, 1, 1},
                         "expected exactly one top-level form, found " +
                             std::to_string(forms.size()));
    return std::move(forms[0]);
}

}  // namespace htnr
