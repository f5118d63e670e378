#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "bn/error.hpp"
#include "bn/model.hpp"
#include "bn/network_io.hpp"
#include "bn/propagation.hpp"
#include "bn/query.hpp"
#include "bn/structure.hpp"

namespace bn::cli {

namespace {

// Six decimals; printf rounds the exact binary value half-to-even.
std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      auto end = item.find(',', start);
      if (end == std::string::npos) end = item.size();
      if (end > start) out.push_back(item.substr(start, end - start));
      start = end + 1;
    }
  }
  return out;
}

VarId variable(const BayesianNetwork& net, const std::string& name) {
  auto v = net.find(name);
  if (!v) throw UsageError("unknown variable '" + name + "'");
  return *v;
}

std::pair<VarId, std::size_t> variable_state(const BayesianNetwork& net, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) throw UsageError("expected VAR=STATE, got '" + item + "'");
  const VarId v = variable(net, item.substr(0, eq));
  const auto state = item.substr(eq + 1);
  auto s = net.state_index(v, state);
  if (!s) throw UsageError("variable '" + net.variable(v).name + "' has no state '" + state + "'");
  return {v, *s};
}

Evidence evidence_from(const BayesianNetwork& net, const std::vector<std::string>& hard,
                       const std::vector<std::string>& soft) {
  Evidence e;
  auto observe = [&](VarId v, Observation obs) {
    if (e.contains(v)) throw UsageError("variable '" + net.variable(v).name + "' observed twice");
    e.observe(v, std::move(obs));
  };
  for (const auto& item : split_list(hard)) {
    auto [v, s] = variable_state(net, item);
    observe(v, HardEvidence{s});
  }
  for (const auto& item : split_list(soft)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected VAR=l1:l2:..., got '" + item + "'");
    const VarId v = variable(net, item.substr(0, eq));
    std::vector<double> likelihood;
    std::size_t start = eq + 1;
    while (start <= item.size()) {
      auto end = item.find(':', start);
      if (end == std::string::npos) end = item.size();
      const std::string token = item.substr(start, end - start);
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (token.empty() || used != token.size()) throw UsageError("bad likelihood '" + token + "'");
      likelihood.push_back(x);
      start = end + 1;
    }
    observe(v, SoftEvidence{std::move(likelihood)});
  }
  check_evidence(net, e);
  return e;
}

Method method_from(const std::string& name) {
  if (name == "auto") return Method::Auto;
  if (name == "enum") return Method::Enumeration;
  if (name == "bp") return Method::Polytree;
  if (name == "cutset") return Method::Cutset;
  throw UsageError("unknown method '" + name + "'");
}

std::string render_path(const BayesianNetwork& net, const std::vector<VarId>& path) {
  std::string out = net.variable(path.front()).name;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto& ps = net.parents(path[i]);
    const bool forward = std::find(ps.begin(), ps.end(), path[i - 1]) != ps.end();
    out += forward ? " -> " : " <- ";
    out += net.variable(path[i]).name;
  }
  return out;
}

void print_class(const BayesianNetwork& net, const QueryClass& qc, std::ostream& out,
                 bool details) {
  out << "class: " << (qc.type == InferenceType::None ? "none" : to_string(qc.type)) << '\n';
  if (!details) return;
  for (const auto& sub : qc.sub_verdicts)
    out << net.variable(sub.evidence).name << ": " << to_string(sub.type) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact inference for discrete Bayesian networks", "bn"};
  app.require_subcommand(1);
  bool normalize = false;
  app.add_flag("--normalize", normalize, "Rescale CPT rows within 1e-6 of summing to one");

  std::string file;
  std::string target;
  std::vector<std::string> hard;
  std::vector<std::string> soft;
  std::string method_name = "auto";
  bool trace = false;
  std::string x_name;
  std::string z_name;
  std::vector<std::string> given;
  std::vector<std::string> assign;

  auto* validate_cmd = app.add_subcommand("validate", "Check a network file");
  validate_cmd->add_option("file", file, "Network file")->required();

  auto* query_cmd = app.add_subcommand("query", "Posterior of one variable");
  query_cmd->add_option("file", file, "Network file")->required();
  query_cmd->add_option("--target", target, "Query variable")->required();
  query_cmd->add_option("--evidence", hard, "Hard evidence VAR=STATE[,...]");
  query_cmd->add_option("--soft", soft, "Likelihood evidence VAR=l1:l2[:...][,...]");
  query_cmd->add_option("--method", method_name, "auto|enum|bp|cutset");
  query_cmd->add_flag("--trace", trace, "Print propagation messages (bp only)");

  auto* dsep_cmd = app.add_subcommand("dsep", "d-separation test");
  dsep_cmd->add_option("file", file, "Network file")->required();
  dsep_cmd->add_option("x", x_name, "First variable")->required();
  dsep_cmd->add_option("z", z_name, "Second variable")->required();
  dsep_cmd->add_option("--given", given, "Instantiated variables A[,B...]");

  auto* classify_cmd = app.add_subcommand("classify", "Inference type of a query");
  classify_cmd->add_option("file", file, "Network file")->required();
  classify_cmd->add_option("--target", target, "Query variable")->required();
  classify_cmd->add_option("--evidence", hard, "Hard evidence VAR=STATE[,...]");
  classify_cmd->add_option("--soft", soft, "Likelihood evidence VAR=l1:l2[:...][,...]");

  auto* cutset_cmd = app.add_subcommand("cutset", "Minimum loop cutset");
  cutset_cmd->add_option("file", file, "Network file")->required();

  auto* joint_cmd = app.add_subcommand("joint", "Chain-rule probability of a full assignment");
  joint_cmd->add_option("file", file, "Network file")->required();
  joint_cmd->add_option("--assign", assign, "VAR=STATE for every variable")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    ParseOptions parse_options;
    parse_options.normalize_rows = normalize;

    if (validate_cmd->parsed()) {
      try {
        load_network(file, parse_options);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Validation) throw;
        err << e.what() << '\n';
        return kDomainError;
      }
      out << "valid\n";
      return kOk;
    }

    const BayesianNetwork net = load_network(file, parse_options);

    if (query_cmd->parsed()) {
      const VarId t = variable(net, target);
      const Evidence e = evidence_from(net, hard, soft);
      const Method method = method_from(method_name);
      const auto result = infer(net, t, e, method);
      if (trace) {
        if (result.method != Method::Polytree) throw UsageError("--trace needs the bp method");
        PropagationOptions options;
        options.trace = true;
        out << format_trace(net, propagate(net, e, options).trace);
      }
      const auto& var = net.variable(t);
      for (std::size_t s = 0; s < var.states.size(); ++s)
        out << "P(" << var.name << '=' << var.states[s]
            << ") = " << fixed6(result.belief.probabilities[s]) << '\n';
      if (result.query_class)
        print_class(net, *result.query_class, out, false);
      else
        out << "class: none\n";
      out << "method: " << to_string(result.method) << '\n';
      return kOk;
    }

    if (dsep_cmd->parsed()) {
      const VarId x = variable(net, x_name);
      const VarId z = variable(net, z_name);
      Evidence e;
      for (const auto& name : split_list(given)) {
        const VarId v = variable(net, name);
        if (e.contains(v)) throw UsageError("variable '" + name + "' given twice");
        e.hard(v, 0);
      }
      const auto verdict = d_separated(net, x, z, e);
      if (verdict.separated)
        out << "d-separated\n";
      else
        out << "d-connected: " << render_path(net, verdict.active_path) << '\n';
      return kOk;
    }

    if (classify_cmd->parsed()) {
      const VarId t = variable(net, target);
      const Evidence e = evidence_from(net, hard, soft);
      print_class(net, classify_query(net, t, e), out, true);
      return kOk;
    }

    if (cutset_cmd->parsed()) {
      const auto cutset = select_cutset(net);
      if (cutset.nodes.empty()) {
        out << "polytree\n";
        return kOk;
      }
      out << "cutset:";
      for (std::size_t i = 0; i < cutset.nodes.size(); ++i)
        out << (i ? ", " : " ") << net.variable(cutset.nodes[i]).name;
      out << '\n';
      return kOk;
    }

    if (joint_cmd->parsed()) {
      Assignment a(net.size());
      for (const auto& item : split_list(assign)) {
        auto [v, s] = variable_state(net, item);
        if (a.is_set(v)) throw UsageError("variable '" + net.variable(v).name + "' assigned twice");
        a.set(v, s);
      }
      const double p = joint_probability(net, a);
      out << "P(";
      for (VarId v = 0; v < net.size(); ++v)
        out << (v ? ", " : "") << net.variable(v).name << '=' << net.variable(v).states[a[v]];
      out << ") = " << fixed6(p) << '\n';
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::ImpossibleEvidence:
      case ErrorKind::NotAPolytree:
      case ErrorKind::TooLarge:
        return kDomainError;
      default:
        return kUsageError;
    }
  }
  return kUsageError;
}

}  // namespace bn::cli
