#include "deon/semantics.h"

#include <algorithm>
#include <functional>
#include <map>
#include "json.hpp"
#include <sstream>
#include <stdexcept>

namespace deon {

Model::Model(int n) : worlds(n), rel(static_cast<std::size_t>(n), 0) {
  if (n < 1 || n > kMaxWorlds) throw std::invalid_argument("world count must be in 1..64");
}

void Model::set_atom(const std::string& key, WorldSet truth) {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i] == key) {
      valuation[i] = truth;
      return;
    }
  }
  atoms.push_back(key);
  valuation.push_back(truth);
}

std::optional<WorldSet> Model::atom(const std::string& key) const {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i] == key) return valuation[i];
  }
  return std::nullopt;
}

void Model::validate() const {
  if (worlds < 1 || worlds > kMaxWorlds) throw std::invalid_argument("world count must be in 1..64");
  if (static_cast<int>(rel.size()) != worlds) throw std::invalid_argument("relation has wrong row count");
  if (atoms.size() != valuation.size()) throw std::invalid_argument("valuation shape mismatch");
  WorldSet all = all_worlds(worlds);
  for (WorldSet r : rel) {
    if (r & ~all) throw std::invalid_argument("relation mentions an unknown world");
  }
  for (WorldSet v : valuation) {
    if (v & ~all) throw std::invalid_argument("valuation mentions an unknown world");
  }
}

bool operator==(const Model& a, const Model& b) {
  return a.worlds == b.worlds && a.rel == b.rel && a.atoms == b.atoms &&
         a.valuation == b.valuation && a.domain == b.domain;
}

namespace {

WorldSet permute_set(WorldSet s, const std::vector<int>& perm) {
  WorldSet out = 0;
  for (std::size_t w = 0; w < perm.size(); ++w) {
    if (contains(s, static_cast<int>(w))) out |= WorldSet{1} << perm[w];
  }
  return out;
}

}  // namespace

Model permute(const Model& m, const std::vector<int>& perm) {
  Model out = m;
  for (int s = 0; s < m.worlds; ++s) out.rel[static_cast<std::size_t>(perm[s])] = permute_set(m.rel[s], perm);
  for (auto& v : out.valuation) v = permute_set(v, perm);
  return out;
}

WorldSet opt(const Model& m, WorldSet s) {
  WorldSet out = 0;
  for (int w = 0; w < m.worlds; ++w) {
    if (contains(s, w) && (s & ~m.rel[w]) == 0) out |= WorldSet{1} << w;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compiled evaluation

CompiledFormulas::CompiledFormulas(const std::vector<Formula>& roots, Logic logic,
                                   const std::vector<std::string>& atoms) {
  std::map<std::string, int> atom_index;
  for (std::size_t i = 0; i < atoms.size(); ++i) atom_index[atoms[i]] = static_cast<int>(i);
  std::map<Formula, int> memo;

  auto emit = [&](Code c, int a = -1, int b = -1) {
    prog_.push_back({c, a, b});
    return static_cast<int>(prog_.size()) - 1;
  };

  std::function<int(const Formula&)> rec = [&](const Formula& f) -> int {
    if (auto it = memo.find(f); it != memo.end()) return it->second;
    int r = -1;
    auto top = [&] { return rec(Formula::top()); };
    switch (f.op()) {
      case Op::Atom: {
        if (f.name() == kTopAtom) {
          r = emit(Code::False);
          break;
        }
        std::string key = atom_key(f.name(), f.args());
        auto it = atom_index.find(key);
        if (it == atom_index.end()) throw EvalError("atom not in valuation: " + key);
        r = emit(Code::Atom, it->second);
        break;
      }
      case Op::Not: r = emit(Code::Not, rec(f.lhs())); break;
      case Op::And: r = emit(Code::And, rec(f.lhs()), rec(f.rhs())); break;
      case Op::Or: r = emit(Code::Or, rec(f.lhs()), rec(f.rhs())); break;
      case Op::Implies: r = emit(Code::Implies, rec(f.lhs()), rec(f.rhs())); break;
      case Op::Iff: r = emit(Code::Iff, rec(f.lhs()), rec(f.rhs())); break;
      case Op::Box:
        r = emit(logic == Logic::Sdl ? Code::BoxK : Code::BoxU, rec(f.lhs()));
        break;
      case Op::Dia:
        r = emit(logic == Logic::Sdl ? Code::DiaK : Code::DiaU, rec(f.lhs()));
        break;
      case Op::Oblig:
        if (logic == Logic::Sdl) throw EvalError("dyadic obligation is not part of SDL");
        r = emit(Code::Oblig, rec(f.lhs()), rec(f.rhs()));
        break;
      case Op::ObligM:
        r = logic == Logic::Sdl ? emit(Code::BoxK, rec(f.lhs())) : emit(Code::Oblig, rec(f.lhs()), top());
        break;
      case Op::Perm:
        if (logic == Logic::Sdl) {
          r = emit(Code::Not, emit(Code::BoxK, rec(Formula::negation(f.lhs()))));
        } else {
          r = emit(Code::Not, emit(Code::Oblig, rec(Formula::negation(f.lhs())), top()));
        }
        break;
      case Op::Forb:
        r = logic == Logic::Sdl ? emit(Code::BoxK, rec(Formula::negation(f.lhs())))
                                : emit(Code::Oblig, rec(Formula::negation(f.lhs())), top());
        break;
      case Op::Forall:
      case Op::Exists:
        throw EvalError("formula is not ground: " + print(f));
    }
    memo.emplace(f, r);
    return r;
  };
  for (const Formula& f : roots) roots_.push_back(rec(f));
}

void CompiledFormulas::eval(int n, const WorldSet* rel, const WorldSet* valuation,
                            std::vector<WorldSet>& out) const {
  thread_local std::vector<WorldSet> v;
  v.resize(prog_.size());
  const WorldSet all = all_worlds(n);
  for (std::size_t i = 0; i < prog_.size(); ++i) {
    const Instr& in = prog_[i];
    WorldSet r = 0;
    switch (in.code) {
      case Code::Atom: r = valuation[in.a]; break;
      case Code::False: r = 0; break;
      case Code::Not: r = all & ~v[in.a]; break;
      case Code::And: r = v[in.a] & v[in.b]; break;
      case Code::Or: r = v[in.a] | v[in.b]; break;
      case Code::Implies: r = all & (~v[in.a] | v[in.b]); break;
      case Code::Iff: r = all & ~(v[in.a] ^ v[in.b]); break;
      case Code::BoxK: {
        WorldSet s = v[in.a];
        for (int w = 0; w < n; ++w) {
          if ((rel[w] & ~s) == 0) r |= WorldSet{1} << w;
        }
        break;
      }
      case Code::DiaK: {
        WorldSet s = v[in.a];
        for (int w = 0; w < n; ++w) {
          if (rel[w] & s) r |= WorldSet{1} << w;
        }
        break;
      }
      case Code::BoxU: r = v[in.a] == all ? all : 0; break;
      case Code::DiaU: r = v[in.a] != 0 ? all : 0; break;
      case Code::Oblig: {
        WorldSet cond = v[in.b];
        WorldSet best = 0;
        for (int w = 0; w < n; ++w) {
          if (contains(cond, w) && (cond & ~rel[w]) == 0) best |= WorldSet{1} << w;
        }
        r = (best & ~v[in.a]) == 0 ? all : 0;
        break;
      }
    }
    v[i] = r;
  }
  out.resize(roots_.size());
  for (std::size_t i = 0; i < roots_.size(); ++i) out[i] = v[static_cast<std::size_t>(roots_[i])];
}

WorldSet truth_set(const Model& m, const Formula& f, Logic logic) {
  m.validate();
  CompiledFormulas c({f}, logic, m.atoms);
  std::vector<WorldSet> out;
  c.eval(m.worlds, m.rel.data(), m.valuation.data(), out);
  return out[0];
}

bool eval(const Model& m, int world, const Formula& f, Logic logic) {
  if (world < 0 || world >= m.worlds) throw std::out_of_range("no such world");
  return contains(truth_set(m, f, logic), world);
}

bool valid_in_model(const Model& m, const Formula& f, Logic logic) {
  return truth_set(m, f, logic) == all_worlds(m.worlds);
}

// ---------------------------------------------------------------------------
// Frames

FrameConditions parse_frame(const std::string& text) {
  FrameConditions fc;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "serial") fc.serial = true;
    else if (item == "reflexive") fc.reflexive = true;
    else if (item == "total") fc.total = true;
    else if (item == "transitive") fc.transitive = true;
    else throw std::invalid_argument("unknown frame condition: " + item);
  }
  return fc;
}

std::string to_string(const FrameConditions& fc) {
  std::vector<std::string> parts;
  if (fc.serial) parts.push_back("serial");
  if (fc.reflexive) parts.push_back("reflexive");
  if (fc.total) parts.push_back("total");
  if (fc.transitive) parts.push_back("transitive");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

std::vector<FrameCheck> check_frame(const Model& m, const FrameConditions& fc) {
  std::vector<FrameCheck> out;
  const int n = m.worlds;
  if (fc.serial) {
    FrameCheck c{"serial", true, {}};
    for (int s = 0; s < n && c.holds; ++s) {
      if (m.rel[s] == 0) c = {"serial", false, {s}};
    }
    out.push_back(c);
  }
  if (fc.reflexive) {
    FrameCheck c{"reflexive", true, {}};
    for (int s = 0; s < n && c.holds; ++s) {
      if (!m.related(s, s)) c = {"reflexive", false, {s}};
    }
    out.push_back(c);
  }
  if (fc.total) {
    FrameCheck c{"total", true, {}};
    for (int s = 0; s < n && c.holds; ++s) {
      for (int t = s; t < n && c.holds; ++t) {
        if (!m.related(s, t) && !m.related(t, s)) c = {"total", false, {s, t}};
      }
    }
    out.push_back(c);
  }
  if (fc.transitive) {
    FrameCheck c{"transitive", true, {}};
    for (int s = 0; s < n && c.holds; ++s) {
      for (int t = 0; t < n && c.holds; ++t) {
        if (!m.related(s, t)) continue;
        for (int u = 0; u < n && c.holds; ++u) {
          if (m.related(t, u) && !m.related(s, u)) c = {"transitive", false, {s, t, u}};
        }
      }
    }
    out.push_back(c);
  }
  return out;
}

bool satisfies(int n, const WorldSet* rel, const FrameConditions& fc) {
  for (int s = 0; s < n; ++s) {
    if (fc.serial && rel[s] == 0) return false;
    if (fc.reflexive && !contains(rel[s], s)) return false;
    if (fc.total) {
      for (int t = s + 1; t < n; ++t) {
        if (!contains(rel[s], t) && !contains(rel[t], s)) return false;
      }
      if (!contains(rel[s], s)) return false;
    }
    if (fc.transitive) {
      for (int t = 0; t < n; ++t) {
        if (contains(rel[s], t) && (rel[t] & ~rel[s])) return false;
      }
    }
  }
  return true;
}

bool satisfies(const Model& m, const FrameConditions& fc) { return satisfies(m.worlds, m.rel.data(), fc); }

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json worlds_of(WorldSet s, int n) {
  nlohmann::json arr = nlohmann::json::array();
  for (int w = 0; w < n; ++w) {
    if (contains(s, w)) arr.push_back(w);
  }
  return arr;
}

}  // namespace

std::string model_to_json(const Model& m, int indent) {
  nlohmann::ordered_json j;
  j["worlds"] = m.worlds;
  nlohmann::json pairs = nlohmann::json::array();
  for (int s = 0; s < m.worlds; ++s) {
    for (int t = 0; t < m.worlds; ++t) {
      if (m.related(s, t)) pairs.push_back({s, t});
    }
  }
  j["relation"] = pairs;
  nlohmann::ordered_json val = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < m.atoms.size(); ++i) val[m.atoms[i]] = worlds_of(m.valuation[i], m.worlds);
  j["valuation"] = val;
  j["domain"] = m.domain;
  return j.dump(indent);
}

Model model_from_json(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model JSON: ") + e.what());
  }
  try {
    const int n = j.at("worlds").get<int>();
    if (n < 1 || n > kMaxWorlds) throw std::invalid_argument("model JSON: worlds must be between 1 and 64");
    Model m(n);
    const auto relation = j.value("relation", nlohmann::ordered_json::array());
    for (const auto& p : relation) {
      int s = p.at(0).get<int>();
      int t = p.at(1).get<int>();
      if (s < 0 || t < 0 || s >= m.worlds || t >= m.worlds) {
        throw std::invalid_argument("relation mentions an unknown world");
      }
      m.relate(s, t);
    }
    const auto valuation = j.value("valuation", nlohmann::ordered_json::object());
    for (const auto& [atom, ws] : valuation.items()) {
      WorldSet s = 0;
      for (const auto& w : ws) {
        int k = w.get<int>();
        if (k < 0 || k >= m.worlds) throw std::invalid_argument("valuation mentions an unknown world");
        s |= WorldSet{1} << k;
      }
      m.set_atom(atom, s);
    }
    m.domain = j.value("domain", std::vector<std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model JSON: ") + e.what());
  }
}

}  // namespace deon
