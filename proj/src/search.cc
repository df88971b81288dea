#include "deon/search.h"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <thread>

namespace deon {

std::uint64_t default_node_budget() {
  if (const char* env = std::getenv("DEON_NODE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultNodeBudget;
}

bool Verdict::positive() const { return kind == Kind::ModelFound || kind == Kind::Valid; }

bool Verdict::decided() const { return kind != Kind::NoModelUpTo && kind != Kind::BudgetExceeded; }

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::ModelFound: return "model_found";
    case Verdict::Kind::NoModelUpTo: return "no_model_up_to";
    case Verdict::Kind::DecidedUnsatisfiable: return "decided_unsatisfiable";
    case Verdict::Kind::Valid: return "valid";
    case Verdict::Kind::CountermodelFound: return "countermodel_found";
    case Verdict::Kind::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

namespace {

std::vector<std::string> collect_atoms(const std::vector<Formula>& fs, const std::optional<Formula>& goal) {
  std::set<std::string> s;
  for (const Formula& f : fs) {
    auto a = ground_atoms(f);
    s.insert(a.begin(), a.end());
  }
  if (goal) {
    auto a = ground_atoms(*goal);
    s.insert(a.begin(), a.end());
  }
  return {s.begin(), s.end()};
}

std::vector<std::string> collect_constants(const std::vector<Formula>& fs, const std::optional<Formula>& goal) {
  std::set<std::string> s;
  auto add = [&](const Formula& f) {
    for (const Formula& g : subformulas(f)) {
      if (!g.is_atom()) continue;
      for (const Term& t : g.args()) s.insert(t.name);
    }
  };
  for (const Formula& f : fs) add(f);
  if (goal) add(*goal);
  return {s.begin(), s.end()};
}

int count_subformulas(const std::vector<Formula>& fs, const std::optional<Formula>& goal) {
  std::vector<Formula> all = fs;
  if (goal) all.push_back(*goal);
  return static_cast<int>(subformulas(all).size());
}

// ---------------------------------------------------------------------------
// Canonical enumeration

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

void decode_relation(std::uint64_t code, int n, WorldSet* rows) {
  const WorldSet row_mask = all_worlds(n);
  for (int s = 0; s < n; ++s) rows[s] = (code >> (s * n)) & row_mask;
}

std::uint64_t permuted_relation(const WorldSet* rows, int n, const std::vector<int>& perm) {
  std::uint64_t code = 0;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (contains(rows[s], t)) code |= std::uint64_t{1} << (perm[s] * n + perm[t]);
    }
  }
  return code;
}

// True iff `code` is the least code in its isomorphism class; collects the
// automorphisms (indices into perms) on success.
bool canonical_relation(std::uint64_t code, const WorldSet* rows, int n,
                        const std::vector<std::vector<int>>& perms, std::vector<std::size_t>& auts) {
  auts.clear();
  for (std::size_t k = 0; k < perms.size(); ++k) {
    std::uint64_t pc = permuted_relation(rows, n, perms[k]);
    if (pc < code) return false;
    if (pc == code) auts.push_back(k);
  }
  return true;
}

WorldSet permute_worlds(WorldSet s, const std::vector<int>& perm) {
  WorldSet out = 0;
  for (std::size_t w = 0; w < perm.size(); ++w) {
    if (contains(s, static_cast<int>(w))) out |= WorldSet{1} << perm[w];
  }
  return out;
}

void decode_valuation(std::uint64_t code, int n, int atoms, WorldSet* masks) {
  const WorldSet m = all_worlds(n);
  for (int a = 0; a < atoms; ++a) masks[a] = (code >> (a * n)) & m;
}

// Valuation codes are compared atom-major: higher atoms are more significant.
bool canonical_valuation(std::uint64_t code, const WorldSet* masks, int n, int atoms,
                         const std::vector<std::vector<int>>& perms, const std::vector<std::size_t>& auts) {
  for (std::size_t k : auts) {
    const std::vector<int>& p = perms[k];
    std::uint64_t pc = 0;
    for (int a = 0; a < atoms; ++a) pc |= permute_worlds(masks[a], p) << (a * n);
    if (pc < code) return false;
  }
  return true;
}

std::uint64_t code_limit(int bits) { return bits >= 64 ? ~std::uint64_t{0} : std::uint64_t{1} << bits; }

struct Problem {
  std::vector<Formula> assumptions;
  std::optional<Formula> goal;
  Logic logic;
  std::vector<std::string> atoms;
};

struct EnumContext {
  const Problem& problem;
  const CompiledFormulas& compiled;  // assumptions, then goal
  FrameConditions frame;
  bool require_frame = true;          // false: search frame-violating relations
};

struct Hit {
  std::uint64_t relation = 0;
  std::uint64_t valuation = 0;
  int world = -1;
};

struct ChunkResult {
  std::optional<Hit> hit;
  std::uint64_t nodes = 0;
  bool capped = false;
};

bool check_candidate(const EnumContext& ctx, int n, const WorldSet* rows, const WorldSet* masks,
                     std::vector<WorldSet>& out, int& world) {
  ctx.compiled.eval(n, rows, masks, out);
  const WorldSet all = all_worlds(n);
  const std::size_t na = ctx.problem.assumptions.size();
  for (std::size_t i = 0; i < na; ++i) {
    if (out[i] != all) return false;
  }
  if (!ctx.problem.goal) return true;
  WorldSet falsified = all & ~out[na];
  if (!falsified) return false;
  world = __builtin_ctzll(falsified);
  return true;
}

ChunkResult scan_chunk(const EnumContext& ctx, int n, const std::vector<std::vector<int>>& perms,
                       std::uint64_t begin, std::uint64_t end, std::uint64_t cap) {
  ChunkResult r;
  const int atoms = static_cast<int>(ctx.problem.atoms.size());
  const std::uint64_t val_limit = code_limit(atoms * n);
  std::vector<WorldSet> rows(static_cast<std::size_t>(n));
  std::vector<WorldSet> masks(static_cast<std::size_t>(std::max(atoms, 1)));
  std::vector<std::size_t> auts;
  std::vector<WorldSet> out;
  for (std::uint64_t code = begin; code < end; ++code) {
    if (++r.nodes > cap) {
      r.capped = true;
      return r;
    }
    decode_relation(code, n, rows.data());
    if (satisfies(n, rows.data(), ctx.frame) != ctx.require_frame) continue;
    if (!canonical_relation(code, rows.data(), n, perms, auts)) continue;
    for (std::uint64_t v = 0; v < val_limit; ++v) {
      if (++r.nodes > cap) {
        r.capped = true;
        return r;
      }
      decode_valuation(v, n, atoms, masks.data());
      if (!canonical_valuation(v, masks.data(), n, atoms, perms, auts)) continue;
      int world = -1;
      if (check_candidate(ctx, n, rows.data(), masks.data(), out, world)) {
        r.hit = Hit{code, v, world};
        return r;
      }
      if (v + 1 == 0) break;
    }
  }
  return r;
}

Model build_model(int n, std::uint64_t rel_code, std::uint64_t val_code, const std::vector<std::string>& atoms) {
  Model m(n);
  decode_relation(rel_code, n, m.rel.data());
  std::vector<WorldSet> masks(atoms.size());
  decode_valuation(val_code, n, static_cast<int>(atoms.size()), masks.data());
  m.atoms = atoms;
  m.valuation = masks;
  return m;
}

struct EnumOutcome {
  enum class Kind { Found, Exhausted, Budget } kind = Kind::Exhausted;
  Model model;
  int world = -1;
  std::uint64_t nodes = 0;
};

// Sizes lo..hi in canonical order. Deterministic for any worker count: the
// node count is that of a sequential scan up to the reported outcome.
EnumOutcome enumerate(const EnumContext& ctx, int lo, int hi, std::uint64_t budget, int workers) {
  EnumOutcome result;
  workers = std::max(1, workers);
  constexpr std::uint64_t kChunk = 2048;
  for (int n = lo; n <= hi; ++n) {
    auto perms = permutations(n);
    const std::uint64_t total = code_limit(n * n);
    std::uint64_t start = 0;
    while (start < total) {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
      for (int w = 0; w < workers && start < total; ++w) {
        std::uint64_t end = total - start > kChunk ? start + kChunk : total;
        ranges.emplace_back(start, end);
        start = end;
      }
      const std::uint64_t remaining = budget - result.nodes;
      std::vector<ChunkResult> results(ranges.size());
      if (ranges.size() == 1) {
        results[0] = scan_chunk(ctx, n, perms, ranges[0].first, ranges[0].second, remaining);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < ranges.size(); ++k) {
          pool.emplace_back([&, k] {
            results[k] = scan_chunk(ctx, n, perms, ranges[k].first, ranges[k].second, remaining);
          });
        }
        for (auto& t : pool) t.join();
      }
      for (const ChunkResult& r : results) {
        if (r.capped || result.nodes + r.nodes > budget) {
          result.kind = EnumOutcome::Kind::Budget;
          result.nodes = budget + 1;
          return result;
        }
        result.nodes += r.nodes;
        if (r.hit) {
          result.kind = EnumOutcome::Kind::Found;
          result.model = build_model(n, r.hit->relation, r.hit->valuation, ctx.problem.atoms);
          result.world = r.hit->world;
          return result;
        }
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Propositional skeleton shared by the complete procedures: modal
// subformulas become key variables numbered after the atoms.

struct Skeleton {
  enum class Code { Var, False, Not, And, Or, Implies, Iff };
  struct Instr {
    Code code;
    int a = -1;
    int b = -1;
  };
  enum class KeyKind { Box, Oblig };
  struct Key {
    KeyKind kind;
    int body = -1;  // node of the box body / obligation body
    int cond = -1;  // node of the obligation condition
  };

  int A = 0;
  std::vector<Instr> prog;
  std::vector<Key> keys;
  std::map<std::pair<Formula, Formula>, int> box_keys;    // (body, placeholder)
  std::map<std::pair<Formula, Formula>, int> oblig_keys;  // (body, condition)
  std::map<Formula, int> memo;
  std::map<std::string, int> atom_index;
  Logic logic = Logic::E;

  int emit(Code c, int a = -1, int b = -1) {
    prog.push_back({c, a, b});
    return static_cast<int>(prog.size()) - 1;
  }

  int key_var(int k) { return emit(Code::Var, A + k); }

  int box_key(const Formula& body) {
    auto id = std::make_pair(body, Formula::top());
    auto it = box_keys.find(id);
    if (it != box_keys.end()) return key_var(it->second);
    int k = static_cast<int>(keys.size());
    keys.push_back({KeyKind::Box, -1, -1});
    box_keys.emplace(id, k);
    int b = compile(body);
    keys[static_cast<std::size_t>(k)].body = b;
    return key_var(k);
  }

  int oblig_key(const Formula& body, const Formula& cond) {
    auto id = std::make_pair(body, cond);
    auto it = oblig_keys.find(id);
    if (it != oblig_keys.end()) return key_var(it->second);
    int k = static_cast<int>(keys.size());
    keys.push_back({KeyKind::Oblig, -1, -1});
    oblig_keys.emplace(id, k);
    int b = compile(body);
    int c = compile(cond);
    keys[static_cast<std::size_t>(k)].body = b;
    keys[static_cast<std::size_t>(k)].cond = c;
    return key_var(k);
  }

  int compile(const Formula& f) {
    if (auto it = memo.find(f); it != memo.end()) return it->second;
    int r = -1;
    const bool sdl = logic == Logic::Sdl;
    switch (f.op()) {
      case Op::Atom:
        if (f.name() == kTopAtom) {
          r = emit(Code::False);
        } else {
          r = emit(Code::Var, atom_index.at(atom_key(f.name(), f.args())));
        }
        break;
      case Op::Not: r = emit(Code::Not, compile(f.lhs())); break;
      case Op::And: r = emit(Code::And, compile(f.lhs()), compile(f.rhs())); break;
      case Op::Or: r = emit(Code::Or, compile(f.lhs()), compile(f.rhs())); break;
      case Op::Implies: r = emit(Code::Implies, compile(f.lhs()), compile(f.rhs())); break;
      case Op::Iff: r = emit(Code::Iff, compile(f.lhs()), compile(f.rhs())); break;
      case Op::Box: r = box_key(f.lhs()); break;
      case Op::Dia: r = emit(Code::Not, box_key(Formula::negation(f.lhs()))); break;
      case Op::Oblig:
        if (sdl) throw std::invalid_argument("dyadic obligation is not part of SDL");
        r = oblig_key(f.lhs(), f.rhs());
        break;
      case Op::ObligM: r = sdl ? box_key(f.lhs()) : oblig_key(f.lhs(), Formula::top()); break;
      case Op::Perm:
        r = emit(Code::Not, sdl ? box_key(Formula::negation(f.lhs()))
                                : oblig_key(Formula::negation(f.lhs()), Formula::top()));
        break;
      case Op::Forb:
        r = sdl ? box_key(Formula::negation(f.lhs())) : oblig_key(Formula::negation(f.lhs()), Formula::top());
        break;
      case Op::Forall:
      case Op::Exists:
        throw std::invalid_argument("formula is not ground: " + print(f));
    }
    memo.emplace(f, r);
    return r;
  }

  int vars() const { return A + static_cast<int>(keys.size()); }
};

// Truth tables over all 2^V assignments for selected skeleton nodes.
class Table {
 public:
  Table(const Skeleton& sk, const std::vector<int>& nodes) : vars_(sk.vars()) {
    const std::uint64_t n = std::uint64_t{1} << vars_;
    words_ = static_cast<std::size_t>((n + 63) / 64);
    cols_.assign(nodes.size(), std::vector<std::uint64_t>(words_, 0));
    std::vector<std::uint64_t> v(sk.prog.size());
    static constexpr std::uint64_t kPattern[6] = {0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull,
                                                  0xF0F0F0F0F0F0F0F0ull, 0xFF00FF00FF00FF00ull,
                                                  0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    const std::uint64_t tail = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    for (std::size_t w = 0; w < words_; ++w) {
      const std::uint64_t base = static_cast<std::uint64_t>(w) * 64;
      for (std::size_t i = 0; i < sk.prog.size(); ++i) {
        const auto& in = sk.prog[i];
        std::uint64_t r = 0;
        switch (in.code) {
          case Skeleton::Code::Var:
            r = in.a < 6 ? kPattern[in.a] : (((base >> in.a) & 1u) ? ~std::uint64_t{0} : 0);
            break;
          case Skeleton::Code::False: r = 0; break;
          case Skeleton::Code::Not: r = ~v[in.a]; break;
          case Skeleton::Code::And: r = v[in.a] & v[in.b]; break;
          case Skeleton::Code::Or: r = v[in.a] | v[in.b]; break;
          case Skeleton::Code::Implies: r = ~v[in.a] | v[in.b]; break;
          case Skeleton::Code::Iff: r = ~(v[in.a] ^ v[in.b]); break;
        }
        v[i] = r;
      }
      for (std::size_t c = 0; c < nodes.size(); ++c) {
        cols_[c][w] = v[static_cast<std::size_t>(nodes[c])] & (w + 1 == words_ ? tail : ~std::uint64_t{0});
      }
    }
  }

  bool get(std::size_t col, std::uint64_t idx) const { return (cols_[col][idx >> 6] >> (idx & 63)) & 1u; }

 private:
  int vars_;
  std::size_t words_ = 0;
  std::vector<std::vector<std::uint64_t>> cols_;
};

struct Decision {
  bool satisfiable = false;
  std::optional<Model> model;
  int world = -1;
  std::uint64_t nodes = 0;
};

struct Prepared {
  Skeleton sk;
  std::vector<int> roots;  // assumption nodes
  int goal = -1;
};

Prepared prepare(const Problem& p) {
  Prepared pr;
  pr.sk.logic = p.logic;
  pr.sk.A = static_cast<int>(p.atoms.size());
  for (std::size_t i = 0; i < p.atoms.size(); ++i) pr.sk.atom_index[p.atoms[i]] = static_cast<int>(i);
  for (const Formula& f : p.assumptions) pr.roots.push_back(pr.sk.compile(f));
  if (p.goal) pr.goal = pr.sk.compile(*p.goal);
  return pr;
}

void guard_size(const Skeleton& sk) {
  if (sk.vars() > kMaxCompleteVariables) {
    throw SearchError("problem too large for complete mode: " + std::to_string(sk.A) + " atoms and " +
                      std::to_string(sk.keys.size()) + " modal keys exceed " +
                      std::to_string(kMaxCompleteVariables) + " variables");
  }
}

// Columns: 0 = all assumptions, 1 = goal, then per key body (and condition).
std::vector<int> table_nodes(Prepared& pr) {
  Skeleton& sk = pr.sk;
  int loc = sk.emit(Skeleton::Code::Not, sk.emit(Skeleton::Code::False));
  for (int r : pr.roots) loc = sk.emit(Skeleton::Code::And, loc, r);
  int goal = pr.goal >= 0 ? pr.goal : sk.emit(Skeleton::Code::False);
  std::vector<int> nodes{loc, goal};
  for (const auto& k : sk.keys) {
    nodes.push_back(k.body);
    nodes.push_back(k.cond >= 0 ? k.cond : k.body);
  }
  return nodes;
}

std::size_t body_col(std::size_t k) { return 2 + 2 * k; }
std::size_t cond_col(std::size_t k) { return 3 + 2 * k; }

void superset_closure(std::vector<std::uint8_t>& f, int bits) {
  for (int b = 0; b < bits; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t s = 0; s < f.size(); ++s) {
      if (!(s & bit)) f[s] |= f[s | bit];
    }
  }
}

// Global satisfiability in KD by elimination of Hintikka-style types.
Decision decide_sdl(const Problem& p) {
  Prepared pr = prepare(p);
  guard_size(pr.sk);
  std::vector<int> nodes = table_nodes(pr);
  const Skeleton& sk = pr.sk;
  const int A = sk.A;
  const int K = static_cast<int>(sk.keys.size());
  const std::uint64_t N = std::uint64_t{1} << sk.vars();
  Table table(sk, nodes);
  Decision d;
  d.nodes = N;

  std::vector<std::uint8_t> alive(N, 0);
  std::vector<std::uint32_t> body_mask(N, 0);
  for (std::uint64_t t = 0; t < N; ++t) {
    alive[t] = table.get(0, t);
    std::uint32_t m = 0;
    for (int k = 0; k < K; ++k) {
      if (table.get(body_col(static_cast<std::size_t>(k)), t)) m |= 1u << k;
    }
    body_mask[t] = m;
  }
  const std::size_t KS = std::size_t{1} << K;
  bool changed = true;
  std::vector<std::uint8_t> any(KS);
  std::vector<std::vector<std::uint8_t>> miss(static_cast<std::size_t>(K), std::vector<std::uint8_t>(KS));
  while (changed) {
    changed = false;
    std::fill(any.begin(), any.end(), 0);
    for (auto& g : miss) std::fill(g.begin(), g.end(), 0);
    for (std::uint64_t u = 0; u < N; ++u) {
      if (!alive[u]) continue;
      any[body_mask[u]] = 1;
      for (int k = 0; k < K; ++k) {
        if (!((body_mask[u] >> k) & 1u)) miss[static_cast<std::size_t>(k)][body_mask[u]] = 1;
      }
    }
    superset_closure(any, K);
    for (auto& g : miss) superset_closure(g, K);
    for (std::uint64_t t = 0; t < N; ++t) {
      if (!alive[t]) continue;
      const std::uint32_t truth = static_cast<std::uint32_t>(t >> A);
      bool ok = any[truth];
      for (int k = 0; k < K && ok; ++k) {
        if (!((truth >> k) & 1u)) ok = miss[static_cast<std::size_t>(k)][truth];
      }
      if (!ok) {
        alive[t] = 0;
        changed = true;
      }
    }
    d.nodes += N;
  }

  std::optional<std::uint64_t> start;
  for (std::uint64_t t = 0; t < N && !start; ++t) {
    if (alive[t] && (!p.goal || !table.get(1, t))) start = t;
  }
  if (!start) return d;
  d.satisfiable = true;

  // Breadth-first closure from the start type: one world per type, each
  // deliberately given the least successor types meeting its requirements.
  std::vector<std::uint64_t> types{*start};
  std::map<std::uint64_t, int> world_of{{*start, 0}};
  std::vector<std::vector<int>> succ;
  auto find_succ = [&](std::uint32_t need, int missing) -> std::uint64_t {
    for (std::uint64_t u = 0; u < N; ++u) {
      if (!alive[u] || (body_mask[u] & need) != need) continue;
      if (missing >= 0 && ((body_mask[u] >> missing) & 1u)) continue;
      return u;
    }
    throw std::logic_error("type elimination left an unsupported type");
  };
  for (std::size_t i = 0; i < types.size(); ++i) {
    const std::uint32_t truth = static_cast<std::uint32_t>(types[i] >> A);
    std::vector<std::uint64_t> targets{find_succ(truth, -1)};
    for (int k = 0; k < K; ++k) {
      if (!((truth >> k) & 1u)) targets.push_back(find_succ(truth, k));
    }
    std::vector<int> edges;
    for (std::uint64_t u : targets) {
      auto [it, inserted] = world_of.emplace(u, static_cast<int>(types.size()));
      if (inserted) {
        if (types.size() >= static_cast<std::size_t>(kMaxWorlds)) {
          throw SearchError("witness model exceeds 64 worlds");
        }
        types.push_back(u);
      }
      edges.push_back(it->second);
    }
    succ.push_back(edges);
  }
  Model m(static_cast<int>(types.size()));
  for (std::size_t i = 0; i < types.size(); ++i) {
    for (int t : succ[i]) m.relate(static_cast<int>(i), t);
  }
  m.atoms = p.atoms;
  m.valuation.assign(p.atoms.size(), 0);
  for (std::size_t i = 0; i < types.size(); ++i) {
    for (int a = 0; a < A; ++a) {
      if ((types[i] >> a) & 1u) m.valuation[static_cast<std::size_t>(a)] |= WorldSet{1} << i;
    }
  }
  d.model = m;
  d.world = 0;
  return d;
}

// System E: the values of boxes and obligations are world-independent, so
// guess them, then check realizability by types over the atoms.
Decision decide_e(const Problem& p) {
  Prepared pr = prepare(p);
  guard_size(pr.sk);
  std::vector<int> nodes = table_nodes(pr);
  const Skeleton& sk = pr.sk;
  const int A = sk.A;
  const int K = static_cast<int>(sk.keys.size());
  const std::uint64_t TA = std::uint64_t{1} << A;
  Table table(sk, nodes);
  Decision d;

  for (std::uint64_t g = 0; g < (std::uint64_t{1} << K); ++g) {
    auto idx = [&](std::uint64_t a) { return a | (g << A); };
    auto key_true = [&](int k) { return ((g >> k) & 1u) != 0; };
    auto body = [&](int k, std::uint64_t a) { return table.get(body_col(static_cast<std::size_t>(k)), idx(a)); };
    auto cond = [&](int k, std::uint64_t a) { return table.get(cond_col(static_cast<std::size_t>(k)), idx(a)); };
    d.nodes += TA;

    std::vector<std::uint64_t> S;
    for (std::uint64_t a = 0; a < TA; ++a) {
      if (!table.get(0, idx(a))) continue;
      bool ok = true;
      for (int k = 0; k < K && ok; ++k) {
        if (sk.keys[static_cast<std::size_t>(k)].kind == Skeleton::KeyKind::Box && key_true(k)) ok = body(k, a);
      }
      if (ok) S.push_back(a);
    }
    if (S.empty()) continue;

    auto first_in_s = [&](const std::function<bool(std::uint64_t)>& pred) -> std::optional<std::uint64_t> {
      for (std::uint64_t a : S) {
        if (pred(a)) return a;
      }
      return std::nullopt;
    };

    std::vector<std::uint64_t> bases;
    auto add_base = [&](std::uint64_t a) {
      if (std::find(bases.begin(), bases.end(), a) == bases.end()) bases.push_back(a);
    };
    bool ok = true;
    if (p.goal) {
      auto f = first_in_s([&](std::uint64_t a) { return !table.get(1, idx(a)); });
      if (!f) continue;
      add_base(*f);
    }
    for (int k = 0; k < K && ok; ++k) {
      if (sk.keys[static_cast<std::size_t>(k)].kind != Skeleton::KeyKind::Box || key_true(k)) continue;
      auto w = first_in_s([&](std::uint64_t a) { return !body(k, a); });
      if (!w) ok = false;
      else add_base(*w);
    }
    // Each false obligation needs a candidate best world v; true obligations
    // violated at v need a condition world outside the false one's condition.
    std::vector<std::pair<int, std::uint64_t>> witnesses;
    for (int k = 0; k < K && ok; ++k) {
      if (sk.keys[static_cast<std::size_t>(k)].kind != Skeleton::KeyKind::Oblig || key_true(k)) continue;
      std::optional<std::uint64_t> chosen;
      std::vector<std::uint64_t> blockers;
      for (std::uint64_t v : S) {
        if (!cond(k, v) || body(k, v)) continue;
        std::vector<std::uint64_t> bl;
        bool fine = true;
        for (int i = 0; i < K && fine; ++i) {
          if (sk.keys[static_cast<std::size_t>(i)].kind != Skeleton::KeyKind::Oblig || !key_true(i)) continue;
          if (!cond(i, v) || body(i, v)) continue;
          auto u = first_in_s([&](std::uint64_t a) { return cond(i, a) && !cond(k, a); });
          if (!u) fine = false;
          else bl.push_back(*u);
        }
        if (fine) {
          chosen = v;
          blockers = bl;
          break;
        }
      }
      if (!chosen) {
        ok = false;
        break;
      }
      witnesses.emplace_back(k, *chosen);
      for (std::uint64_t u : blockers) add_base(u);
    }
    if (!ok) continue;
    if (bases.empty()) add_base(S.front());

    const std::size_t n = bases.size() + witnesses.size();
    if (n > static_cast<std::size_t>(kMaxWorlds)) throw SearchError("witness model exceeds 64 worlds");
    std::vector<std::uint64_t> types = bases;
    for (const auto& w : witnesses) types.push_back(w.second);
    Model m(static_cast<int>(n));
    for (std::size_t j = 0; j < witnesses.size(); ++j) {
      const int k = witnesses[j].first;
      const int from = static_cast<int>(bases.size() + j);
      for (std::size_t t = 0; t < n; ++t) {
        if (cond(k, types[t])) m.relate(from, static_cast<int>(t));
      }
    }
    m.atoms = p.atoms;
    m.valuation.assign(p.atoms.size(), 0);
    for (std::size_t t = 0; t < n; ++t) {
      for (int a = 0; a < A; ++a) {
        if ((types[t] >> a) & 1u) m.valuation[static_cast<std::size_t>(a)] |= WorldSet{1} << t;
      }
    }
    d.satisfiable = true;
    d.model = m;
    d.world = 0;
    return d;
  }
  return d;
}

void check_input(const Problem& p) {
  auto check = [&](const Formula& f) {
    if (!is_ground(f)) throw std::invalid_argument("formula is not ground: " + print(f));
    check_language(f, p.logic);
  };
  for (const Formula& f : p.assumptions) check(f);
  if (p.goal) check(*p.goal);
}

// Re-validates a witness through the direct evaluator.
void revalidate(const Problem& p, const Model& m, int world) {
  for (const Formula& f : p.assumptions) {
    if (!valid_in_model(m, f, p.logic)) throw std::logic_error("witness fails assumption " + print(f));
  }
  if (p.goal && eval(m, world, *p.goal, p.logic)) throw std::logic_error("countermodel satisfies the goal");
  if (p.logic == Logic::Sdl && !satisfies(m, FrameConditions{true, false, false, false})) {
    throw std::logic_error("SDL witness is not serial");
  }
}

bool extra_frame(const SearchConfig& cfg) {
  if (cfg.logic == Logic::Sdl) return cfg.frame.reflexive || cfg.frame.total || cfg.frame.transitive;
  return cfg.frame.any();
}

Verdict solve(Problem p, const SearchConfig& cfg) {
  check_input(p);
  p.atoms = collect_atoms(p.assumptions, p.goal);
  const std::vector<std::string> domain = collect_constants(p.assumptions, p.goal);
  if (cfg.max_worlds < 1) throw std::invalid_argument("max_worlds must be at least 1");

  std::vector<Formula> roots = p.assumptions;
  if (p.goal) roots.push_back(*p.goal);
  CompiledFormulas compiled(roots, p.logic, p.atoms);
  EnumContext ctx{p, compiled, cfg.frame, true};
  if (p.logic == Logic::Sdl) ctx.frame.serial = true;

  Verdict v;
  v.subformulas = count_subformulas(p.assumptions, p.goal);
  auto found = [&](Model m, int world, std::uint64_t nodes, std::string method) {
    m.domain = domain;
    revalidate(p, m, world);
    v.kind = p.goal ? Verdict::Kind::CountermodelFound : Verdict::Kind::ModelFound;
    v.model = std::move(m);
    v.world = p.goal ? world : -1;
    v.nodes += nodes;
    v.method = std::move(method);
    return v;
  };

  if (cfg.complete && !extra_frame(cfg)) {
    Decision d = p.logic == Logic::Sdl ? decide_sdl(p) : decide_e(p);
    v.nodes = d.nodes;
    const std::string method = p.logic == Logic::Sdl ? "type-elimination" : "rigid-guess";
    if (!d.satisfiable) {
      v.kind = p.goal ? Verdict::Kind::Valid : Verdict::Kind::DecidedUnsatisfiable;
      v.method = method;
      return v;
    }
    // Prefer a smallest witness when a short enumeration finds one.
    const int below = std::min(d.model->worlds - 1, 4);
    if (below >= 1) {
      EnumOutcome e = enumerate(ctx, 1, below, std::min<std::uint64_t>(cfg.node_budget, 200'000), cfg.workers);
      if (e.kind == EnumOutcome::Kind::Found) return found(e.model, e.world, e.nodes, "enumeration");
      v.nodes += e.nodes;
    }
    return found(*d.model, d.world, 0, method);
  }

  int hi = cfg.max_worlds;
  if (cfg.complete) {
    hi = v.subformulas >= 6 ? kMaxWorlds : std::min(kMaxWorlds, 1 << v.subformulas);
  }
  hi = std::min(hi, kMaxWorlds);
  EnumOutcome e = enumerate(ctx, 1, hi, cfg.node_budget, cfg.workers);
  if (e.kind == EnumOutcome::Kind::Found) return found(e.model, e.world, e.nodes, "enumeration");
  v.nodes = e.nodes;
  v.method = "enumeration";
  v.max_worlds = hi;
  if (e.kind == EnumOutcome::Kind::Budget) {
    v.kind = Verdict::Kind::BudgetExceeded;
  } else if (cfg.complete) {
    v.kind = p.goal ? Verdict::Kind::Valid : Verdict::Kind::DecidedUnsatisfiable;
  } else {
    v.kind = Verdict::Kind::NoModelUpTo;
  }
  return v;
}

}  // namespace

Verdict find_model(const std::vector<Formula>& fs, const SearchConfig& cfg) {
  return solve(Problem{fs, std::nullopt, cfg.logic, {}}, cfg);
}

Verdict entails(const std::vector<Formula>& assumptions, const Formula& goal, const SearchConfig& cfg) {
  return solve(Problem{assumptions, goal, cfg.logic, {}}, cfg);
}

Verdict decide_valid(const Formula& f, const SearchConfig& cfg) {
  if (cfg.complete) {
    const auto n = subformulas(f).size();
    if (n > static_cast<std::size_t>(kMaxCompleteSubformulas)) {
      throw SearchError("complete mode rejects formulas with " + std::to_string(n) + " subformulas (limit " +
                        std::to_string(kMaxCompleteSubformulas) + ")");
    }
  }
  return entails({}, f, cfg);
}

// ---------------------------------------------------------------------------
// Correspondence

namespace {

struct FrameScan {
  const CompiledFormulas& compiled;
  int atoms;
  Logic logic;
  std::uint64_t budget;
  std::uint64_t nodes = 0;

  void tick() {
    if (++nodes > budget) throw SearchError("node budget exceeded");
  }

  // First valuation (Aut-canonical) falsifying the formula, if any.
  std::optional<std::pair<std::uint64_t, int>> falsifier(int n, const WorldSet* rows,
                                                         const std::vector<std::vector<int>>& perms,
                                                         const std::vector<std::size_t>& auts) {
    const std::uint64_t limit = code_limit(atoms * n);
    std::vector<WorldSet> masks(static_cast<std::size_t>(std::max(atoms, 1)));
    std::vector<WorldSet> out;
    const WorldSet all = all_worlds(n);
    for (std::uint64_t v = 0; v < limit; ++v) {
      tick();
      decode_valuation(v, n, atoms, masks.data());
      if (!canonical_valuation(v, masks.data(), n, atoms, perms, auts)) continue;
      compiled.eval(n, rows, masks.data(), out);
      if (out[0] != all) return std::make_pair(v, __builtin_ctzll(all & ~out[0]));
    }
    return std::nullopt;
  }
};

}  // namespace

bool frame_valid(int n, const std::vector<WorldSet>& rel, const Formula& f, Logic logic) {
  auto atoms_set = ground_atoms(f);
  std::vector<std::string> atoms(atoms_set.begin(), atoms_set.end());
  CompiledFormulas compiled({f}, logic, atoms);
  const int a = static_cast<int>(atoms.size());
  if (a * n >= 63) throw SearchError("too many valuations to check frame validity");
  std::vector<WorldSet> masks(static_cast<std::size_t>(std::max(a, 1)));
  std::vector<WorldSet> out;
  for (std::uint64_t v = 0; v < code_limit(a * n); ++v) {
    decode_valuation(v, n, a, masks.data());
    compiled.eval(n, rel.data(), masks.data(), out);
    if (out[0] != all_worlds(n)) return false;
  }
  return true;
}

CorrespondenceReport correspondence(const Formula& schema, const FrameConditions& frame, const SearchConfig& cfg,
                                    int converse_bound) {
  if (!is_ground(schema)) throw std::invalid_argument("schema must be ground");
  check_language(schema, cfg.logic);
  auto atoms_set = ground_atoms(schema);
  std::vector<std::string> atoms(atoms_set.begin(), atoms_set.end());
  CompiledFormulas compiled({schema}, cfg.logic, atoms);
  FrameScan scan{compiled, static_cast<int>(atoms.size()), cfg.logic, cfg.node_budget};
  FrameConditions required = frame;
  FrameConditions base;
  if (cfg.logic == Logic::Sdl) {
    required.serial = true;
    base.serial = true;
  }

  CorrespondenceReport rep;
  rep.frame_bound = cfg.max_worlds;
  rep.converse_bound = converse_bound;
  std::vector<std::size_t> auts;

  for (int n = 1; n <= cfg.max_worlds && rep.frame_implies_schema; ++n) {
    auto perms = permutations(n);
    std::vector<WorldSet> rows(static_cast<std::size_t>(n));
    for (std::uint64_t code = 0; code < code_limit(n * n); ++code) {
      scan.tick();
      decode_relation(code, n, rows.data());
      if (!satisfies(n, rows.data(), required)) continue;
      if (!canonical_relation(code, rows.data(), n, perms, auts)) continue;
      if (auto f = scan.falsifier(n, rows.data(), perms, auts)) {
        Model m = build_model(n, code, f->first, atoms);
        if (valid_in_model(m, schema, cfg.logic)) throw std::logic_error("counterexample does not re-validate");
        rep.frame_implies_schema = false;
        rep.counterexample = m;
        rep.counterexample_world = f->second;
        break;
      }
    }
  }

  for (int n = 1; n <= converse_bound && !rep.converse_fails; ++n) {
    auto perms = permutations(n);
    std::vector<WorldSet> rows(static_cast<std::size_t>(n));
    for (std::uint64_t code = 0; code < code_limit(n * n); ++code) {
      scan.tick();
      decode_relation(code, n, rows.data());
      if (!satisfies(n, rows.data(), base) || satisfies(n, rows.data(), frame)) continue;
      if (!canonical_relation(code, rows.data(), n, perms, auts)) continue;
      if (scan.falsifier(n, rows.data(), perms, auts)) continue;
      Model m = build_model(n, code, 0, atoms);
      if (!frame_valid(n, m.rel, schema, cfg.logic) || satisfies(m, frame)) {
        throw std::logic_error("correspondence witness does not re-validate");
      }
      rep.converse_fails = true;
      rep.witness = m;
      rep.witness_frame = check_frame(m, frame);
      break;
    }
  }
  rep.nodes = scan.nodes;
  return rep;
}

// ---------------------------------------------------------------------------
// Minimal unsatisfiable subsets

std::vector<std::size_t> minimal_unsat_subset(const std::vector<std::vector<Formula>>& groups,
                                              const SearchConfig& cfg) {
  if (!cfg.complete) throw SearchError("minimal unsatisfiable subsets require complete mode");
  auto satisfiable = [&](const std::vector<std::size_t>& idx) {
    std::vector<Formula> fs;
    for (std::size_t i : idx) fs.insert(fs.end(), groups[i].begin(), groups[i].end());
    Verdict v = find_model(fs, cfg);
    if (v.kind == Verdict::Kind::ModelFound) return true;
    if (v.kind == Verdict::Kind::DecidedUnsatisfiable) return false;
    throw SearchError("satisfiability undetermined (" + to_string(v.kind) + ")");
  };
  std::vector<std::size_t> kept(groups.size());
  std::iota(kept.begin(), kept.end(), 0);
  if (satisfiable(kept)) throw SearchError("input is satisfiable; no unsatisfiable subset exists");
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::vector<std::size_t> trial;
    for (std::size_t k : kept) {
      if (k != i) trial.push_back(k);
    }
    if (trial.size() == kept.size()) continue;
    if (!satisfiable(trial)) kept = trial;
  }
  if (satisfiable(kept)) throw std::logic_error("shrinking produced a satisfiable set");
  for (std::size_t i : kept) {
    std::vector<std::size_t> trial;
    for (std::size_t k : kept) {
      if (k != i) trial.push_back(k);
    }
    if (!satisfiable(trial)) throw std::logic_error("shrinking result is not minimal");
  }
  return kept;
}

std::vector<Formula> minimal_unsat_subset(const std::vector<Formula>& fs, const SearchConfig& cfg) {
  std::vector<std::vector<Formula>> groups;
  for (const Formula& f : fs) groups.push_back({f});
  std::vector<Formula> out;
  for (std::size_t i : minimal_unsat_subset(groups, cfg)) out.push_back(fs[i]);
  return out;
}

}  // namespace deon
