#include <random>
#include <sstream>

#include "session.hpp"
#include "stm/heller.hpp"

namespace stmtoda {

using namespace stm;

namespace {

std::string part(const RModule& M) { return partition_string(M.block_sizes()); }

json space_json(const StableHomSpace& H) {
  return {{"src", part(H.src())}, {"tgt", part(H.tgt())}, {"dim", H.dim()}, {"basis_labels", H.basis_labels()}};
}

json map_json(const StableMap& f) {
  StableHomSpace H = f.space();
  json j = space_json(H);
  j["coords"] = f.coords();
  return j;
}

json bracket_json(const BracketSet& b) {
  json j = {{"kind", "bracket"},
            {"definition", b.definition},
            {"variance", b.variance == Variance::Direct ? "direct" : "opposite"},
            {"ambient", {{"src", part(b.ambient.src())}, {"tgt", part(b.ambient.tgt())}, {"dim", b.ambient.dim()}}},
            {"basis_labels", b.ambient.basis_labels()},
            {"elements", b.elements},
            {"indeterminacy_rank", b.indeterminacy_rank()}};
  if (!b.jseq.empty()) j["jseq"] = b.jseq;
  if (!b.empty_reason.empty()) j["empty_reason"] = b.empty_reason;
  return j;
}

json triangle_json(const Triangle& t) {
  return {{"kind", "triangle"},
          {"X", part(t.X())},
          {"Y", part(t.Y())},
          {"Z", part(t.Z())},
          {"f", map_json(t.f)},
          {"g", map_json(t.g)},
          {"h", map_json(t.h)}};
}

int int_arg(const Token& t) { return std::stoi(t.text); }

std::string kv(const Command& c, const std::string& key, const std::string& fallback) {
  for (const Token& t : c.args)
    if (t.text.rfind(key + "=", 0) == 0) return t.text.substr(key.size() + 1);
  return fallback;
}

RModule random_module(std::mt19937_64& rng, const Ring& r, int max_dim) {
  std::vector<int> parts;
  int dim = 0;
  const int blocks = std::uniform_int_distribution<int>(1, 2)(rng);
  for (int b = 0; b < blocks; ++b) {
    const int a = std::uniform_int_distribution<int>(1, std::max(1, r.m - 1))(rng);
    if (dim + a > max_dim) break;
    parts.push_back(a);
    dim += a;
  }
  if (parts.empty()) parts.push_back(1);
  return module_from_partition(r, parts);
}

StableMap random_map(std::mt19937_64& rng, const RModule& A, const RModule& B) {
  StableHomSpace H(A, B);
  Vec v(static_cast<std::size_t>(H.dim()));
  for (int& c : v) c = std::uniform_int_distribution<int>(0, A.p() - 1)(rng);
  return H.element(v);
}

class Executor {
 public:
  Executor(const Session& s, const RunOptions& o) : s_(s), opts_(o) {}

  json run() {
    json doc;
    doc["ring"] = {{"p", s_.ring->p}, {"m", s_.ring->m}};
    doc["objects"] = json::array();
    for (const std::string& name : s_.order) {
      if (auto it = s_.modules.find(name); it != s_.modules.end()) {
        const RModule& M = it->second;
        doc["objects"].push_back({{"name", name},
                                  {"kind", "module"},
                                  {"dim", M.dim()},
                                  {"blocks", M.block_sizes()},
                                  {"projective", is_projective(M)}});
      } else {
        json j = map_json(s_.maps.at(name));
        j["name"] = name;
        j["kind"] = "map";
        doc["objects"].push_back(std::move(j));
      }
    }
    doc["results"] = json::array();
    for (const Command& c : s_.commands) {
      json r;
      try {
        r = execute(c);
      } catch (const EnumerationOverflow& e) {
        throw CommandError(c.line, c.source,
                           "enumeration of " + std::to_string(e.requested()) + " points exceeds --max-enumerate " +
                               std::to_string(e.cap()));
      } catch (const stm::Error& e) {
        throw CommandError(c.line, c.source, e.what());
      }
      r["line"] = c.line;
      r["command"] = c.source;
      doc["results"].push_back(std::move(r));
    }
    return doc;
  }

 private:
  const StableMap& map(const Token& t) const { return s_.maps.at(t.text); }
  const RModule& module(const std::string& n) const { return s_.modules.at(n); }

  json execute(const Command& c) {
    const auto& a = c.args;
    const std::uint64_t cap = opts_.max_enumerate;
    if (c.name == "sthom") {
      json j = space_json(StableHomSpace(module(a[0].text), module(a[1].text)));
      j["kind"] = "sthom";
      return j;
    }
    if (c.name == "cone") return triangle_json(cone_triangle(map(a[0])));
    if (c.name == "fiber") return triangle_json(fiber_triangle(map(a[0])));
    if (c.name == "bracket") {
      const BracketDefn d = a[0].text == "cc" ? BracketDefn::CC : a[0].text == "fc" ? BracketDefn::FC : BracketDefn::FF;
      const StableMap &f3 = map(a[1]), &f2 = map(a[2]), &f1 = map(a[3]);
      json j = bracket_json(bracket3(f3, f2, f1, d, cap));
      if (d == BracketDefn::FC) {
        json fill = json::array();
        for (const TodaFamilyElement& e : toda_family(f3, f2, f1, cap))
          fill.push_back({{"sigma_alpha", map_json(e.sigma_alpha)}, {"beta", map_json(e.beta)}});
        j["fillers"] = std::move(fill);
      }
      return j;
    }
    if (c.name == "nbracket") {
      std::vector<int> js;
      std::size_t first = 0;
      if (!a.empty() && a[0].text.front() == '[') {
        std::stringstream ss(a[0].text.substr(1, a[0].text.size() - 2));
        for (std::string item; std::getline(ss, item, ',');) js.push_back(std::stoi(item));
        first = 1;
      }
      std::vector<StableMap> maps;
      for (std::size_t i = first; i < a.size(); ++i) maps.push_back(map(a[i]));
      return bracket_json(higher_bracket(maps, js, cap));
    }
    if (c.name == "adams") return adams(c);
    if (c.name == "page") {
      SSPage pg = page(*ss_, int_arg(a[0]));
      json groups = json::array();
      for (const SSGroup& g : pg.groups)
        groups.push_back({{"s", g.s}, {"t", g.t}, {"dim", g.dim()}, {"e1_dim", g.E1.dim()}, {"reps", g.reps}});
      json diffs = json::array();
      for (const auto& [key, m] : pg.d) {
        json rows = json::array();
        for (int i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
        diffs.push_back({{"s", key.first}, {"t", key.first + key.second}, {"rows", m.rows()}, {"cols", m.cols()},
                         {"matrix", rows}});
      }
      return {{"kind", "page"}, {"r", pg.r}, {"groups", groups}, {"differentials", diffs}};
    }
    if (c.name == "dr" || c.name == "drforms") {
      const int r = int_arg(a[1]);
      const int s = std::stoi(kv(c, "s", "0"));
      const int t = std::stoi(kv(c, "t", std::to_string(s)));
      if (s >= ss_->length()) throw Error("s=" + std::to_string(s) + " is beyond the resolution length");
      StableHomSpace H = ss_->E1(s, t);
      const StableMap& x = map(a[0]);
      if (!(x.src() == H.src()) || !(x.tgt() == H.tgt()))
        throw Error(a[0].text + " is not in E_1^{" + std::to_string(s) + "," + std::to_string(t) + "} = T(" +
                    part(H.src()) + ", " + part(H.tgt()) + ")");
      StableMap xe = H.element(H.coords(x.rep()));
      if (c.name == "dr") {
        json j = bracket_json(dr_set(*ss_, xe, s, t, r, cap));
        j["kind"] = "dr";
        j["r"] = r;
        j["s"] = s;
        j["t"] = t;
        return j;
      }
      return drforms(dr_bracket_forms(*ss_, xe, s, t, r, cap));
    }
    if (c.name == "heller") {
      Triangle t{map(a[0]), map(a[1]), map(a[2]), Provenance::Candidate};
      HellerReport rep = heller_check(t);
      json j = {{"kind", "heller"},
                {"exact", rep.exact},
                {"contains_identity", rep.contains_identity},
                {"distinguished", rep.distinguished()},
                {"objects_tested", rep.objects_tested}};
      if (rep.failure)
        j["failure"] = {{"A", part(rep.failure->A)},
                        {"position", rep.failure->position},
                        {"kernel_dim", rep.failure->kernel_dim},
                        {"image_dim", rep.failure->image_dim}};
      return j;
    }
    if (c.name == "sparse") {
      SparseReport rep = sparse_check(module(a[0].text), int_arg(a[1]), int_arg(a[2]));
      json dims = json::array();
      for (const auto& [d, n] : rep.dims) dims.push_back({d, n});
      return {{"kind", "sparse"},     {"generator", part(module(a[0].text))},
              {"N", rep.N},           {"window", rep.window},
              {"dims", dims},         {"nonzero_degrees", rep.nonzero_degrees},
              {"sparse", rep.sparse}};
    }
    return selftest_heller(int_arg(a[1]));
  }

  json adams(const Command& c) {
    const RModule& M = module(c.args[0].text);
    const RModule& G = module(kv(c, "gen", ""));
    const int len = std::stoi(kv(c, "len", "1"));
    const RModule& Y = module(kv(c, "target", c.args[0].text));
    AdamsResolution res = adams_resolution(M, ghost_class(G), len);
    ss_.emplace(res, Y);
    json stages = json::array();
    for (int s = 0; s < res.length(); ++s) {
      const auto i = static_cast<std::size_t>(s);
      stages.push_back({{"s", s},
                        {"X", part(res.X[i])},
                        {"P", part(res.P[i])},
                        {"degrees", res.degrees[i]},
                        {"fiber", part(res.fiber[i])},
                        {"p", map_json(res.p[i])},
                        {"i", map_json(res.i[i])},
                        {"delta", map_json(res.delta[i])}});
    }
    json e1 = json::array();
    for (int s = 0; s < res.length(); ++s)
      for (int u = 0; u < 2; ++u) e1.push_back({{"s", s}, {"t", s + u}, {"dim", ss_->E1(s, s + u).dim()}});
    return {{"kind", "adams"},
            {"module", part(M)},
            {"generator", part(res.cls.generator)},
            {"period", res.cls.period},
            {"target", part(Y)},
            {"length", res.length()},
            {"stages", stages},
            {"X_end", part(res.X.back())},
            {"E1", e1}};
  }

  json drforms(const DrFormsReport& rep) {
    json forms = {{"dr", bracket_json(rep.dr)},
                  {"full", bracket_json(rep.full)},
                  {"restricted", bracket_json(rep.restricted)},
                  {"filtered", bracket_json(rep.filtered)}};
    if (rep.composed) forms["composed"] = bracket_json(*rep.composed);
    if (rep.inner) forms["inner"] = bracket_json(*rep.inner);
    if (rep.middle) forms["middle"] = bracket_json(*rep.middle);
    if (rep.outer) forms["outer"] = bracket_json(*rep.outer);
    json W = json::array();
    for (const RModule& w : rep.W) W.push_back(part(w));
    json j = {{"kind", "drforms"},
              {"r", rep.r},
              {"s", rep.s},
              {"t", rep.t},
              {"forms", forms},
              {"W", W},
              {"flags",
               {{"all_equal", rep.all_equal()},
                {"full_equal", rep.full_equal},
                {"restricted_equal", rep.restricted_equal},
                {"filtered_equal", rep.filtered_equal}}}};
    if (rep.r == 2) {
      j["flags"]["composed_equal"] = rep.composed_equal;
      j["flags"]["chain_holds"] = rep.chain_holds;
      j["flags"]["first_proper"] = rep.first_proper;
      j["flags"]["second_proper"] = rep.second_proper;
    }
    return j;
  }

  // Heller checker against the cone comparison on random candidates.
  json selftest_heller(int count) {
    std::mt19937_64 rng(opts_.seed);
    const Ring& r = *s_.ring;
    int agree = 0, distinguished = 0;
    json bad = json::array();
    for (int n = 0; n < count; ++n) {
      StableMap f = random_map(rng, random_module(rng, r, 4), random_module(rng, r, 4));
      Triangle t = cone_triangle(f);
      const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
      std::string label = "cone";
      if (kind == 1) {
        t = rotate(t, 1);
        label = "rotate";
      } else if (kind == 2) {
        t.h = stable_zero(t.Z(), t.h.tgt());
        label = "zeroed";
      } else if (kind == 3) {
        t.g = -t.g;
        label = "negated";
      }
      const bool verdict = heller_check(t).distinguished();
      const bool truth = distinguished_by_comparison(t);
      distinguished += truth ? 1 : 0;
      if (verdict == truth)
        ++agree;
      else
        bad.push_back({{"candidate", n}, {"kind", label}, {"heller", verdict}, {"comparison", truth}});
    }
    return {{"kind", "selftest"},       {"target", "heller"},     {"seed", opts_.seed},
            {"candidates", count},      {"agree", agree},         {"distinguished", distinguished},
            {"disagreements", bad}};
  }

  const Session& s_;
  RunOptions opts_;
  std::optional<AdamsSS> ss_;
};

}  // namespace

json run_session(const Session& session, const RunOptions& opts) { return Executor(session, opts).run(); }

}  // namespace stmtoda
