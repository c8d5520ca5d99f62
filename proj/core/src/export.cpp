#include "causal_cgs/export.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace causal_cgs {

using json = nlohmann::ordered_json;

namespace {

std::string move_text(const CausalModel& model, const Move& m) {
  return m.is_noop() ? "-" : model.text(m.value());
}

std::string vector_text(const CausalModel& model, const MoveVector& v) {
  std::string out = "<";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ",";
    out += move_text(model, v[k]);
  }
  return out + ">";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

CgsRecord::Vector record_vector(const CausalModel& model, const MoveVector& v) {
  CgsRecord::Vector out;
  for (const auto& m : v) {
    if (m.is_noop())
      out.emplace_back(std::nullopt);
    else
      out.emplace_back(model.text(m.value()));
  }
  return out;
}

json vector_json(const CgsRecord::Vector& v) {
  json out = json::array();
  for (const auto& m : v) {
    if (m)
      out.push_back(*m);
    else
      out.push_back(nullptr);
  }
  return out;
}

CgsRecord::Vector parse_vector(const json& j) {
  CgsRecord::Vector out;
  for (const auto& m : j) {
    if (m.is_null())
      out.emplace_back(std::nullopt);
    else
      out.emplace_back(m.get<std::string>());
  }
  return out;
}

json settings_json(const std::vector<CgsRecord::Setting>& s) {
  json out = json::object();
  for (const auto& [k, v] : s) out[k] = v;
  return out;
}

std::vector<CgsRecord::Setting> parse_settings(const json& j) {
  std::vector<CgsRecord::Setting> out;
  for (const auto& [k, v] : j.items()) out.emplace_back(k, v.get<std::string>());
  return out;
}

}  // namespace

std::string export_dot(const CausalCgs& cgs) {
  const auto& model = cgs.model();
  const Cgs& base = cgs.base();
  std::ostringstream out;
  out << "digraph causal_cgs {\n";
  out << "  node [shape=box];\n";
  for (StateId q = 0; q < cgs.num_states(); ++q) {
    std::string label;
    bool first = true;
    for (VarId v : model.endogenous()) {
      if (!first) label += " ";
      first = false;
      label += model.name(v) + "=" + model.text(cgs.label(q)[v]);
    }
    out << "  " << base.state_name(q) << " [label=\"" << dot_escape(base.state_name(q)) << "\\n"
        << dot_escape(label) << "\"];\n";
  }
  for (StateId q = 0; q < cgs.num_states(); ++q) {
    for (const auto& v : legal_move_vectors(base, q)) {
      const StateId to = base.transition(q, v);
      if (to == q) continue;
      out << "  " << base.state_name(q) << " -> " << base.state_name(to) << " [label=\""
          << dot_escape(vector_text(model, v)) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

CgsRecord to_record(const CausalCgs& cgs) {
  const auto& model = cgs.model();
  const Cgs& base = cgs.base();
  CgsRecord r;
  for (StateId q = 0; q < cgs.num_states(); ++q) {
    CgsRecord::State s;
    s.i = cgs.index(q).i;
    s.j = cgs.index(q).j;
    for (VarId v = 0; v < model.num_variables(); ++v)
      s.label.emplace_back(model.name(v), model.text(cgs.label(q)[v]));
    r.states.push_back(std::move(s));
  }
  for (AgentId a = 0; a < cgs.agents().size(); ++a) {
    const std::string& name = model.name(cgs.agents()[a]);
    r.agents.push_back(name);
    CgsRecord::StateMoves per_state;
    for (StateId q = 0; q < cgs.num_states(); ++q)
      per_state.emplace_back(base.state_name(q), record_vector(model, base.moves(a, q)));
    r.moves.emplace_back(name, std::move(per_state));
  }
  for (StateId q = 0; q < cgs.num_states(); ++q)
    for (const auto& v : legal_move_vectors(base, q))
      r.transitions.push_back(
          {base.state_name(q), record_vector(model, v), base.state_name(base.transition(q, v))});
  for (VarId v : model.endogenous()) r.ranks.emplace_back(model.name(v), cgs.ranking().rank(v));
  for (const auto& [u, s] : cgs.origin().context)
    r.context.emplace_back(model.name(u), model.text(s));
  for (const auto& [v, s] : cgs.origin().generating)
    r.intervention.emplace_back(model.name(v), model.text(s));
  return r;
}

std::string to_json(const CgsRecord& r) {
  json doc;
  json states = json::array();
  for (const auto& s : r.states) {
    json label = settings_json(s.label);
    states.push_back({{"i", s.i}, {"j", s.j}, {"label", label}});
  }
  doc["states"] = std::move(states);
  json moves = json::object();
  for (const auto& [agent, per_state] : r.moves) {
    json m = json::object();
    for (const auto& [state, v] : per_state) m[state] = vector_json(v);
    moves[agent] = std::move(m);
  }
  doc["moves"] = std::move(moves);
  json transitions = json::array();
  for (const auto& t : r.transitions)
    transitions.push_back({{"from", t.from}, {"vector", vector_json(t.vector)}, {"to", t.to}});
  doc["transitions"] = std::move(transitions);
  json ranks = json::object();
  for (const auto& [v, k] : r.ranks) ranks[v] = k;
  doc["ranks"] = std::move(ranks);
  doc["origin"] = {{"context", settings_json(r.context)},
                   {"intervention", settings_json(r.intervention)}};
  return doc.dump(2) + "\n";
}

std::string export_json(const CausalCgs& cgs) { return to_json(to_record(cgs)); }

CgsRecord parse_cgs_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("malformed CGS JSON: ") + e.what());
  }
  CgsRecord r;
  try {
    for (const auto& s : doc.at("states")) {
      CgsRecord::State st;
      st.i = s.at("i").get<int>();
      st.j = s.at("j").get<std::size_t>();
      st.label = parse_settings(s.at("label"));
      r.states.push_back(std::move(st));
    }
    for (const auto& [agent, per_state] : doc.at("moves").items()) {
      r.agents.push_back(agent);
      CgsRecord::StateMoves sm;
      for (const auto& [state, v] : per_state.items()) sm.emplace_back(state, parse_vector(v));
      r.moves.emplace_back(agent, std::move(sm));
    }
    for (const auto& t : doc.at("transitions"))
      r.transitions.push_back({t.at("from").get<std::string>(), parse_vector(t.at("vector")),
                               t.at("to").get<std::string>()});
    for (const auto& [v, k] : doc.at("ranks").items()) r.ranks.emplace_back(v, k.get<int>());
    r.context = parse_settings(doc.at("origin").at("context"));
    r.intervention = parse_settings(doc.at("origin").at("intervention"));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed CGS JSON: ") + e.what());
  }
  return r;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

}  // namespace causal_cgs
