#include "bn/network_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "bn/error.hpp"

namespace bn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool is_name(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (ch == ' ' || ch == '\t' || ch == ',' || ch == ':' || ch == '|' || ch == '#' || ch == '=')
      return false;
  return true;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options) : options_(options) {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines_.push_back(text.substr(start, end - start));
      start = end + 1;
    }
  }

  BayesianNetwork run() {
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      std::string_view line = lines_[i];
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      statement(i + 1, line);
    }
    if (!have_header_) throw Error(ErrorKind::Parse, "missing network header");
    finish_cpt();

    std::vector<Cpt> cpts;
    for (auto& block : cpts_) cpts.push_back(std::move(block.cpt));
    BayesianNetwork net(name_, variables_, std::move(cpts));

    auto violations = validate(net);
    if (!violations.empty()) {
      std::string msg = "invalid network";
      for (const auto& v : violations) msg += "\n  line " + std::to_string(locate(v)) + ": " + v.message;
      throw Error(ErrorKind::Validation, msg);
    }
    return net;
  }

 private:
  struct CptBlock {
    Cpt cpt;
    std::size_t line;
    std::vector<std::size_t> row_lines;
  };

  std::size_t locate(const Violation& v) const {
    if (v.variable) {
      for (const auto& block : cpts_) {
        if (block.cpt.child != *v.variable) continue;
        if (v.row && *v.row < block.row_lines.size()) return block.row_lines[*v.row];
        return block.line;
      }
      return variable_lines_[*v.variable];
    }
    return 0;
  }

  void statement(std::size_t lineno, std::string_view line) {
    const auto space = line.find_first_of(" \t");
    const std::string_view keyword = line.substr(0, space);
    const std::string_view rest =
        space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));

    if (!have_header_) {
      if (keyword != "network") fail(lineno, "missing network header");
      if (!is_name(rest)) fail(lineno, "bad network name");
      name_ = std::string(rest);
      have_header_ = true;
      return;
    }
    if (keyword == "network") fail(lineno, "second network header");
    if (keyword == "variable") {
      finish_cpt();
      variable(lineno, rest);
    } else if (keyword == "cpt") {
      finish_cpt();
      cpt_header(lineno, rest);
    } else if (line.find(':') != std::string_view::npos) {
      row(lineno, line);
    } else {
      fail(lineno, "unrecognized statement '" + std::string(keyword) + "'");
    }
  }

  void variable(std::size_t lineno, std::string_view rest) {
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) fail(lineno, "expected 'variable <name> : <states>'");
    const auto name = trim(rest.substr(0, colon));
    if (!is_name(name)) fail(lineno, "bad variable name");
    if (index_.count(std::string(name))) fail(lineno, "variable '" + std::string(name) + "' declared twice");
    Variable var{std::string(name), {}};
    for (auto state : split(rest.substr(colon + 1), ',')) {
      if (!is_name(state)) fail(lineno, "bad state name in '" + var.name + "'");
      var.states.emplace_back(state);
    }
    index_[var.name] = variables_.size();
    variables_.push_back(std::move(var));
    variable_lines_.push_back(lineno);
  }

  VarId lookup(std::size_t lineno, std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) fail(lineno, "undeclared variable '" + std::string(name) + "'");
    return it->second;
  }

  void cpt_header(std::size_t lineno, std::string_view rest) {
    const auto bar = rest.find('|');
    const auto child_name = trim(rest.substr(0, bar));
    if (!is_name(child_name)) fail(lineno, "expected 'cpt <child> [| <parents>]'");
    CptBlock block{Cpt{lookup(lineno, child_name), {}, {}}, lineno, {}};
    for (const auto& other : cpts_)
      if (other.cpt.child == block.cpt.child) fail(lineno, "second CPT for '" + std::string(child_name) + "'");
    if (bar != std::string_view::npos)
      for (auto parent : split(rest.substr(bar + 1), ',')) block.cpt.parents.push_back(lookup(lineno, parent));
    cpts_.push_back(std::move(block));
    open_ = true;
    expected_.assign(cpts_.back().cpt.parents.size(), 0);
    rows_left_ = 1;
    for (VarId p : cpts_.back().cpt.parents) rows_left_ *= variables_[p].states.size();
  }

  void row(std::size_t lineno, std::string_view line) {
    if (!open_) fail(lineno, "probability row outside a cpt block");
    CptBlock& block = cpts_.back();
    const auto colon = line.find(':');
    const auto labels = trim(line.substr(0, colon));
    if (rows_left_ == 0) fail(lineno, "more rows than parent assignments");

    const auto& parents = block.cpt.parents;
    if (parents.empty()) {
      if (!labels.empty()) fail(lineno, "root CPT row takes no parent states");
    } else {
      auto parts = split(labels, ',');
      if (parts.size() != parents.size())
        fail(lineno, "expected " + std::to_string(parents.size()) + " parent states");
      for (std::size_t i = 0; i < parents.size(); ++i) {
        const auto& want = variables_[parents[i]].states[expected_[i]];
        if (parts[i] != want)
          fail(lineno, "expected parent state '" + want + "' for '" + variables_[parents[i]].name +
                           "', got '" + std::string(parts[i]) + "'");
      }
    }

    std::vector<double> probs;
    for (auto token : split(line.substr(colon + 1), ',')) {
      double p = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), p);
      if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
        fail(lineno, "bad probability '" + std::string(token) + "'");
      probs.push_back(p);
    }
    if (options_.normalize_rows) normalize_row(probs);
    block.cpt.rows.push_back(std::move(probs));
    block.row_lines.push_back(lineno);

    --rows_left_;
    for (std::size_t i = expected_.size(); i-- > 0;) {
      if (++expected_[i] < variables_[parents[i]].states.size()) break;
      expected_[i] = 0;
    }
  }

  void finish_cpt() { open_ = false; }

  const ParseOptions& options_;
  std::vector<std::string_view> lines_;
  bool have_header_ = false;
  std::string name_;
  std::vector<Variable> variables_;
  std::vector<std::size_t> variable_lines_;
  std::map<std::string, VarId> index_;
  std::vector<CptBlock> cpts_;
  bool open_ = false;
  std::vector<std::size_t> expected_;
  std::size_t rows_left_ = 0;
};

void append_number(std::string& out, double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, end);
}

}  // namespace

BayesianNetwork parse_network(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).run();
}

BayesianNetwork load_network(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_network(text.str(), options);
}

std::string serialize_network(const BayesianNetwork& net) {
  std::string out = "network " + net.name() + "\n";
  for (const auto& var : net.variables()) {
    out += "variable " + var.name + " :";
    for (std::size_t s = 0; s < var.states.size(); ++s) out += (s ? ", " : " ") + var.states[s];
    out += '\n';
  }
  for (VarId v = 0; v < net.size(); ++v) {
    const Cpt& cpt = net.cpt(v);
    out += "\ncpt " + net.variable(v).name;
    for (std::size_t i = 0; i < cpt.parents.size(); ++i)
      out += (i ? ", " : " | ") + net.variable(cpt.parents[i]).name;
    out += '\n';
    std::vector<std::size_t> states(cpt.parents.size(), 0);
    for (const auto& row : cpt.rows) {
      for (std::size_t i = 0; i < states.size(); ++i) {
        if (i) out += ',';
        out += net.variable(cpt.parents[i]).states[states[i]];
      }
      out += states.empty() ? ":" : " :";
      for (std::size_t x = 0; x < row.size(); ++x) {
        out += x ? ", " : " ";
        append_number(out, row[x]);
      }
      out += '\n';
      for (std::size_t i = states.size(); i-- > 0;) {
        if (++states[i] < net.state_count(cpt.parents[i])) break;
        states[i] = 0;
      }
    }
  }
  return out;
}

}  // namespace bn
