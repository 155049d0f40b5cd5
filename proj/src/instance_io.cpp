// Copyright 2026 The refloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "refloc/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "refloc/numeric_io.hpp"

namespace refloc {

namespace {

// Whitespace-tolerant token scanner tracking 1-based line/column.
class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  bool eof() {
    skip_space();
    return pos_ >= text_.size();
  }

  struct Token {
    std::string_view text;
    int line;
    int column;
  };

  Token next(const char* what) {
    skip_space();
    if (pos_ >= text_.size()) {
      throw ParseError(std::string("unexpected end of input, expected ") + what, line_,
                       col_);
    }
    const int tl = line_, tc = col_;
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) advance();
    return {text_.substr(start, pos_ - start), tl, tc};
  }

  double next_real(const char* what) {
    const Token tok = next(what);
    double value = 0.0;
    const char* begin = tok.text.data();
    const char* end = begin + tok.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
      throw ParseError("malformed number '" + std::string(tok.text) + "' for " + what,
                       tok.line, tok.column);
    }
    if (value < 0.0) {
      throw ParseError(std::string("negative coefficient for ") + what, tok.line,
                       tok.column);
    }
    return value;
  }

  int next_count(const char* what) {
    const Token tok = next(what);
    int value = 0;
    const char* begin = tok.text.data();
    const char* end = begin + tok.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || value <= 0) {
      throw ParseError("expected positive integer for " + std::string(what) + ", got '" +
                           std::string(tok.text) + "'",
                       tok.line, tok.column);
    }
    return value;
  }

  int line() const { return line_; }
  int column() const { return col_; }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

Instance parse_orlib(std::string_view text) {
  Tokenizer tok(text);
  Instance inst;
  inst.n_facilities = tok.next_count("facility count");
  inst.n_customers = tok.next_count("customer count");
  inst.capacity.resize(inst.n_facilities);
  inst.fixed_cost.resize(inst.n_facilities);
  for (int j = 0; j < inst.n_facilities; ++j) {
    inst.capacity[j] = tok.next_real("capacity");
    inst.fixed_cost[j] = tok.next_real("fixed cost");
  }
  inst.demand.resize(inst.n_customers);
  for (int i = 0; i < inst.n_customers; ++i) inst.demand[i] = tok.next_real("demand");
  inst.assign_cost.assign(inst.n_customers, std::vector<double>(inst.n_facilities));
  for (int i = 0; i < inst.n_customers; ++i) {
    for (int j = 0; j < inst.n_facilities; ++j) {
      inst.assign_cost[i][j] = tok.next_real("assignment cost");
    }
  }
  if (!tok.eof()) {
    throw ParseError("trailing data: file holds more values than the declared " +
                         std::to_string(inst.n_facilities) + " facilities x " +
                         std::to_string(inst.n_customers) +
                         " customers (dimension mismatch)",
                     tok.line(), tok.column());
  }
  inst.validate();
  return inst;
}

std::string write_canonical(const Instance& inst) {
  inst.validate();
  std::string out;
  out.reserve(64 + 16 * static_cast<std::size_t>(inst.n_facilities) *
                       static_cast<std::size_t>(inst.n_customers));
  out += "[meta]\n";
  out += "format_version = 1\n";
  out += "n_facilities = " + std::to_string(inst.n_facilities) + "\n";
  out += "n_customers = " + std::to_string(inst.n_customers) + "\n";
  auto emit_block = [&out](const char* name, const std::vector<double>& v) {
    out += name;
    out += "\n";
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) out += ' ';
      out += format_double(v[k]);
    }
    out += "\n";
  };
  emit_block("[capacity]", inst.capacity);
  emit_block("[fixed_cost]", inst.fixed_cost);
  emit_block("[demand]", inst.demand);
  out += "[assign_cost]\n";
  for (int i = 0; i < inst.n_customers; ++i) {
    for (int j = 0; j < inst.n_facilities; ++j) {
      if (j) out += ' ';
      out += format_double(inst.assign_cost[i][j]);
    }
    out += "\n";
  }
  return out;
}

namespace {

// Minimal section reader for the canonical document.
struct SectionScanner {
  explicit SectionScanner(std::string_view text) : tok(text) {}

  void expect_section(const char* name) {
    auto t = tok.next("section header");
    if (t.text != name) {
      throw ParseError("expected section " + std::string(name) + ", found '" +
                           std::string(t.text) + "'",
                       t.line, t.column);
    }
  }

  // keyed "name = value" line inside [meta]
  long long meta_value(const char* key) {
    auto k = tok.next("meta key");
    if (k.text != key) {
      throw ParseError("expected meta key '" + std::string(key) + "', found '" +
                           std::string(k.text) + "'",
                       k.line, k.column);
    }
    auto eq = tok.next("'='");
    if (eq.text != "=") throw ParseError("expected '=' after meta key", eq.line, eq.column);
    auto v = tok.next("meta value");
    long long value = 0;
    auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), value);
    if (ec != std::errc{} || ptr != v.text.data() + v.text.size()) {
      throw ParseError("malformed meta value '" + std::string(v.text) + "'", v.line,
                       v.column);
    }
    return value;
  }

  Tokenizer tok;
};

}  // namespace

Instance read_canonical(std::string_view text) {
  SectionScanner sc(text);
  sc.expect_section("[meta]");
  const long long version = sc.meta_value("format_version");
  if (version != 1) {
    throw ParseError("unsupported format_version " + std::to_string(version), 2, 1);
  }
  Instance inst;
  const long long nf = sc.meta_value("n_facilities");
  const long long nc = sc.meta_value("n_customers");
  if (nf <= 0 || nc <= 0) throw ParseError("dimensions must be positive", 3, 1);
  inst.n_facilities = static_cast<int>(nf);
  inst.n_customers = static_cast<int>(nc);

  auto read_block = [&sc](const char* name, std::vector<double>& out, int count) {
    sc.expect_section(name);
    out.resize(count);
    for (int k = 0; k < count; ++k) out[k] = sc.tok.next_real(name);
  };
  read_block("[capacity]", inst.capacity, inst.n_facilities);
  read_block("[fixed_cost]", inst.fixed_cost, inst.n_facilities);
  read_block("[demand]", inst.demand, inst.n_customers);
  sc.expect_section("[assign_cost]");
  inst.assign_cost.assign(inst.n_customers, std::vector<double>(inst.n_facilities));
  for (int i = 0; i < inst.n_customers; ++i) {
    for (int j = 0; j < inst.n_facilities; ++j) {
      inst.assign_cost[i][j] = sc.tok.next_real("[assign_cost]");
    }
  }
  if (!sc.tok.eof()) {
    throw ParseError("trailing data after [assign_cost] block", sc.tok.line(),
                     sc.tok.column());
  }
  inst.validate();
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::size_t head = text.find_first_not_of(" \t\r\n");
  const bool looks_canonical =
      head != std::string::npos && text.compare(head, 6, "[meta]") == 0;
  if (looks_canonical || path.extension() == ".cflp") return read_canonical(text);
  return parse_orlib(text);
}

}  // namespace refloc
