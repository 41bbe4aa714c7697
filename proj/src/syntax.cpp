#include "natl/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace natl {

std::string Diagnostic::to_string() const {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << message;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) os << (i + 1 == expected.size() ? " or " : ", ");
      os << expected[i];
    }
    os << ')';
  }
  return os.str();
}

SyntaxError::SyntaxError(Diagnostic d)
    : std::runtime_error(d.to_string()), diagnostic_(std::move(d)) {}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += '\n';
    out += d.to_string();
  }
  return out;
}

bool is_ident_start(char ch) {
  auto c = static_cast<unsigned char>(ch);
  return std::isalnum(c) || c >= 0x80;
}

bool is_ident_char(char ch) {
  auto c = static_cast<unsigned char>(ch);
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

class Parser {
 public:
  Parser(std::string_view text, const CopulaRegistry& registry,
         std::size_t first_line)
      : text_(text), registry_(registry), line_(first_line) {}

  Term parse_top() {
    Term first = parse_term();
    skip_space();
    if (!at_end() && is_copula_char(peek())) {
      const Copula& copula = parse_copula();
      Term second = parse_term();
      return make_binary(copula, std::move(first), std::move(second));
    }
    return first;
  }

  void expect_end() {
    skip_space();
    if (!at_end()) {
      fail("unexpected input '" + std::string(1, peek()) + "'", {"end of input"});
    }
  }

  // Label detection: identifier followed by ':'.
  std::optional<std::string> try_label() {
    std::size_t save = pos_;
    std::size_t save_col = col_;
    skip_space();
    if (at_end() || !is_ident_start(peek())) {
      restore(save, save_col);
      return std::nullopt;
    }
    std::string ident = read_identifier();
    skip_space();
    if (!at_end() && peek() == ':') {
      advance();
      return ident;
    }
    restore(save, save_col);
    return std::nullopt;
  }

  std::optional<double> try_confidence() {
    skip_space();
    if (at_end() || peek() != '%') return std::nullopt;
    advance();
    skip_space();
    std::size_t start_col = col_;
    double value = 0.0;
    auto rest = text_.substr(pos_);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc() || ptr == rest.data()) {
      fail("malformed confidence", {"number"});
    }
    std::size_t consumed = static_cast<std::size_t>(ptr - rest.data());
    pos_ += consumed;
    col_ += consumed;
    skip_space();
    if (at_end() || peek() != '%') {
      fail("unterminated confidence", {"'%'"});
    }
    advance();
    if (!(value >= 0.0 && value <= 1.0)) {
      fail_at(start_col, "confidence out of range", {});
    }
    return value;
  }

 private:
  Term parse_term() {
    skip_space();
    if (at_end()) fail("unexpected end of input", {"'('", "identifier", "variable"});
    char c = peek();
    if (c == '(') return parse_parenthesized();
    if (c == '$') {
      advance();
      if (at_end() || !is_ident_start(peek())) {
        fail("variable name expected after '$'", {"identifier"});
      }
      return Term::variable(read_identifier());
    }
    if (is_ident_start(c)) return parse_basic();
    fail("unexpected '" + std::string(1, c) + "'", {"'('", "identifier", "variable"});
  }

  Term parse_parenthesized() {
    std::size_t open_col = col_;
    advance();  // '('
    skip_space();
    if (!at_end() && peek() == ')') {
      fail("empty compound", {"term"});
    }
    Term first = parse_term();
    skip_space();
    if (at_end()) fail("unexpected end of input", {"','", "copula", "')'"});
    char c = peek();
    if (c == ',') {
      std::vector<Term> elements;
      while (!at_end() && peek() == ',') {
        advance();
        elements.push_back(parse_term());
        skip_space();
      }
      expect_close();
      return Term::compound(std::move(first), std::move(elements));
    }
    if (is_copula_char(c)) {
      const Copula& copula = parse_copula();
      Term second = parse_term();
      skip_space();
      expect_close();
      return make_binary(copula, std::move(first), std::move(second));
    }
    if (c == ')') {
      fail_at(open_col, "empty compound: a compound needs at least one element",
              {"','", "copula"});
    }
    fail("unexpected '" + std::string(1, c) + "'", {"','", "copula", "')'"});
  }

  void expect_close() {
    if (at_end() || peek() != ')') {
      if (at_end()) fail("unexpected end of input", {"','", "')'"});
      fail("unexpected '" + std::string(1, peek()) + "'", {"','", "')'"});
    }
    advance();
  }

  Term parse_basic() {
    std::size_t start_col = col_;
    std::string ident = read_identifier();
    std::optional<std::uint32_t> token;
    auto us = ident.rfind('_');
    if (us != std::string::npos && us > 0 && us + 1 < ident.size() &&
        std::all_of(ident.begin() + static_cast<std::ptrdiff_t>(us) + 1, ident.end(),
                    [](unsigned char ch) { return std::isdigit(ch); })) {
      std::uint64_t value = 0;
      auto digits = std::string_view(ident).substr(us + 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec != std::errc() || value == 0 ||
          value > std::numeric_limits<std::uint32_t>::max()) {
        fail_at(start_col, "token index in '" + ident + "' must be a positive integer", {});
      }
      token = static_cast<std::uint32_t>(value);
      ident.resize(us);
    }
    try {
      return Term::basic(ident, token);
    } catch (const std::invalid_argument& e) {
      fail_at(start_col, e.what(), {});
    }
  }

  const Copula& parse_copula() {
    std::size_t start_col = col_;
    std::size_t start = pos_;
    while (!at_end() && is_copula_char(peek())) advance();
    std::string surface(text_.substr(start, pos_ - start));
    const Copula* copula = registry_.by_surface(surface);
    if (copula == nullptr) {
      std::vector<std::string> known;
      for (const auto& c : registry_.all()) known.push_back("'" + c.surface + "'");
      fail_at(start_col, "unknown copula token '" + surface + "'", known);
    }
    return *copula;
  }

  Term make_binary(const Copula& copula, Term left, Term right) {
    if (copula.kind == CopulaKind::linkage) {
      return Term::linkage(copula, std::move(left), std::move(right));
    }
    return Term::statement(copula, std::move(left), std::move(right));
  }

  std::string read_identifier() {
    std::size_t start = pos_;
    advance();
    while (!at_end()) {
      char c = peek();
      if (is_ident_char(c)) {
        advance();
      } else if (c == '-' && pos_ + 1 < text_.size() && is_ident_char(text_[pos_ + 1])) {
        advance();
      } else {
        break;
      }
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void restore(std::size_t pos, std::size_t col) {
    pos_ = pos;
    col_ = col;
  }

  [[noreturn]] void fail(std::string message, std::vector<std::string> expected) {
    fail_at(col_, std::move(message), std::move(expected));
  }

  [[noreturn]] void fail_at(std::size_t col, std::string message,
                            std::vector<std::string> expected) {
    throw SyntaxError(Diagnostic{line_, col, std::move(message), std::move(expected)});
  }

  std::string_view text_;
  const CopulaRegistry& registry_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

void print_to(std::string& out, const Term& t) {
  switch (t.kind()) {
    case TermKind::basic:
      out += t.symbol();
      if (t.token_index()) {
        out += '_';
        out += std::to_string(*t.token_index());
      }
      return;
    case TermKind::variable:
      out += '$';
      out += t.name();
      return;
    case TermKind::compound: {
      out += '(';
      print_to(out, t.relation());
      for (const auto& e : t.elements()) {
        out += ", ";
        print_to(out, e);
      }
      out += ')';
      return;
    }
    case TermKind::statement:
    case TermKind::linkage:
      out += '(';
      print_to(out, t.left());
      out += ' ';
      out += t.copula().surface;
      out += ' ';
      print_to(out, t.right());
      out += ')';
      return;
  }
}

}  // namespace

KbSyntaxError::KbSyntaxError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

Term parse_term(std::string_view text, const CopulaRegistry& registry) {
  Parser parser(text, registry, 1);
  Term t = parser.parse_top();
  parser.expect_end();
  return t;
}

std::string print_term(const Term& t) {
  std::string out;
  print_to(out, t);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
  return os << print_term(t);
}

SourceJudgment parse_judgment(std::string_view line, const CopulaRegistry& registry,
                              std::size_t line_number) {
  Parser parser(line, registry, line_number);
  auto label = parser.try_label();
  Term term = parser.parse_top();
  auto confidence = parser.try_confidence();
  parser.expect_end();
  return SourceJudgment{std::move(term), confidence.value_or(1.0), std::move(label),
                        line_number};
}

std::vector<SourceJudgment> parse_kb(std::string_view text,
                                     const CopulaRegistry& registry) {
  std::vector<SourceJudgment> out;
  std::vector<Diagnostic> diagnostics;
  std::map<std::string, std::size_t> labels;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_number;
    pos = eol + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    try {
      SourceJudgment j = parse_judgment(line, registry, line_number);
      if (j.label) {
        auto [it, inserted] = labels.emplace(*j.label, line_number);
        if (!inserted) {
          diagnostics.push_back({line_number, 1,
                                 "duplicate label '" + *j.label +
                                     "' (first defined on line " +
                                     std::to_string(it->second) + ")",
                                 {}});
          continue;
        }
      }
      out.push_back(std::move(j));
    } catch (const SyntaxError& e) {
      diagnostics.push_back(e.diagnostic());
    }
  }
  if (!diagnostics.empty()) throw KbSyntaxError(std::move(diagnostics));
  return out;
}

std::string format_confidence(double t) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), t);
  std::string out(buf, ptr);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string print_judgment(const Term& term, double confidence,
                           const std::optional<std::string>& label) {
  std::string out;
  if (label) {
    out += *label;
    out += ": ";
  }
  out += print_term(term);
  out += " % ";
  out += format_confidence(confidence);
  out += " %";
  return out;
}

}  // namespace natl
