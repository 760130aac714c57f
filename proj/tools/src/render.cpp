#include <sstream>

#include "session.hpp"

namespace stmtoda {

namespace {

std::string coef_term(int c, int p, const std::string& label) {
  if (c == 1) return label;
  if (c == p - 1) return "-" + label;
  return std::to_string(c) + "*" + label;
}

std::string combination(const json& coords, const json& labels, int p) {
  std::string out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const int c = coords[i].get<int>();
    if (c == 0) continue;
    std::string term = coef_term(c, p, labels[i].get<std::string>());
    if (out.empty())
      out = term;
    else if (term.front() == '-')
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

std::string vec(const json& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i].get<int>());
  return s + "]";
}

std::string yes(const json& b) { return b.get<bool>() ? "yes" : "no"; }

std::string labels_line(const json& labels) {
  std::string s;
  for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? ", " : "") + labels[i].get<std::string>();
  return s.empty() ? "(none)" : s;
}

class Renderer {
 public:
  explicit Renderer(int p) : p_(p) {}

  void map(const std::string& name, const json& m, const std::string& indent) {
    out_ << indent << name << ": " << m["src"].get<std::string>() << " -> " << m["tgt"].get<std::string>() << " = "
         << combination(m["coords"], m["basis_labels"], p_) << "\n";
  }

  void bracket(const json& b, const std::string& indent) {
    const json& amb = b["ambient"];
    out_ << indent << "ambient T(" << amb["src"].get<std::string>() << ", " << amb["tgt"].get<std::string>()
         << "), dim " << amb["dim"].get<int>() << ", basis " << labels_line(b["basis_labels"]) << "\n";
    if (!b["definition"].get<std::string>().empty())
      out_ << indent << "definition " << b["definition"].get<std::string>() << " ("
           << b["variance"].get<std::string>() << ")\n";
    if (b.contains("jseq")) out_ << indent << "jseq " << vec(b["jseq"]) << "\n";
    std::string elems, coords;
    for (std::size_t i = 0; i < b["elements"].size(); ++i) {
      elems += (i ? ", " : "") + combination(b["elements"][i], b["basis_labels"], p_);
      coords += (i ? ", " : "") + vec(b["elements"][i]);
    }
    out_ << indent << "elements {" << elems << "}  size " << b["elements"].size() << "\n";
    out_ << indent << "coords {" << coords << "}\n";
    out_ << indent << "indeterminacy rank " << b["indeterminacy_rank"].get<int>() << "\n";
    if (b.contains("empty_reason")) out_ << indent << "empty: " << b["empty_reason"].get<std::string>() << "\n";
  }

  void result(const json& r) {
    out_ << "\n[line " << r["line"].get<int>() << "] " << r["command"].get<std::string>() << "\n";
    const std::string kind = r["kind"].get<std::string>();
    if (kind == "sthom") {
      out_ << "  T(" << r["src"].get<std::string>() << ", " << r["tgt"].get<std::string>() << ") dim "
           << r["dim"].get<int>() << "\n  basis " << labels_line(r["basis_labels"]) << "\n";
    } else if (kind == "triangle") {
      out_ << "  " << r["X"].get<std::string>() << " -> " << r["Y"].get<std::string>() << " -> "
           << r["Z"].get<std::string>() << " -> S" << r["X"].get<std::string>() << "\n";
      for (const char* m : {"f", "g", "h"}) map(m, r[m], "  ");
    } else if (kind == "bracket") {
      bracket(r, "  ");
      if (r.contains("fillers")) {
        out_ << "  fillers " << r["fillers"].size() << "\n";
        for (const json& f : r["fillers"]) {
          map("Salpha", f["sigma_alpha"], "    ");
          map("beta", f["beta"], "    ");
        }
      }
    } else if (kind == "adams") {
      out_ << "  module " << r["module"].get<std::string>() << ", generator " << r["generator"].get<std::string>()
           << " (period " << r["period"].get<int>() << "), target " << r["target"].get<std::string>()
           << ", length " << r["length"].get<int>() << "\n";
      out_ << "  s  X_s        P_s        degrees    fiber\n";
      for (const json& st : r["stages"]) {
        out_ << "  " << pad(std::to_string(st["s"].get<int>()), 3) << pad(st["X"].get<std::string>(), 11)
             << pad(st["P"].get<std::string>(), 11) << pad(vec(st["degrees"]), 11) << st["fiber"].get<std::string>()
             << "\n";
        map("p", st["p"], "       ");
        map("i", st["i"], "       ");
        map("delta", st["delta"], "       ");
      }
      out_ << "  X_end " << r["X_end"].get<std::string>() << "\n  E1 dims (s,t):";
      for (const json& e : r["E1"])
        out_ << " (" << e["s"].get<int>() << "," << e["t"].get<int>() << ")=" << e["dim"].get<int>();
      out_ << "\n";
    } else if (kind == "page") {
      out_ << "  E_" << r["r"].get<int>() << " dims (s,t):";
      for (const json& g : r["groups"])
        out_ << " (" << g["s"].get<int>() << "," << g["t"].get<int>() << ")=" << g["dim"].get<int>();
      out_ << "\n";
      for (const json& d : r["differentials"]) {
        out_ << "  d from (" << d["s"].get<int>() << "," << d["t"].get<int>() << "): " << d["rows"].get<int>() << "x"
             << d["cols"].get<int>();
        for (const json& row : d["matrix"]) out_ << " " << vec(row);
        out_ << "\n";
      }
    } else if (kind == "dr") {
      out_ << "  d_" << r["r"].get<int>() << " of x in E_1^{" << r["s"].get<int>() << "," << r["t"].get<int>()
           << "}\n";
      bracket(r, "  ");
    } else if (kind == "drforms") {
      out_ << "  r=" << r["r"].get<int>() << " s=" << r["s"].get<int>() << " t=" << r["t"].get<int>() << "\n";
      for (const char* name : {"dr", "full", "restricted", "filtered", "composed", "inner", "middle", "outer"}) {
        if (!r["forms"].contains(name)) continue;
        out_ << "  " << name << ":\n";
        bracket(r["forms"][name], "    ");
      }
      std::string w;
      for (const json& x : r["W"]) w += (w.empty() ? "" : " ") + x.get<std::string>();
      out_ << "  W " << (w.empty() ? "(none)" : w) << "\n";
      for (const auto& [flag, v] : r["flags"].items()) out_ << "  " << flag << " " << yes(v) << "\n";
    } else if (kind == "heller") {
      out_ << "  exact " << yes(r["exact"]) << ", contains identity " << yes(r["contains_identity"])
           << ", distinguished " << yes(r["distinguished"]) << " (" << r["objects_tested"].get<int>()
           << " test objects)\n";
      if (r.contains("failure")) {
        const json& f = r["failure"];
        out_ << "  not exact at " << f["position"].get<std::string>() << " for A = " << f["A"].get<std::string>()
             << ": kernel dim " << f["kernel_dim"].get<int>() << ", image dim " << f["image_dim"].get<int>() << "\n";
      }
    } else if (kind == "sparse") {
      out_ << "  generator " << r["generator"].get<std::string>() << ", N=" << r["N"].get<int>() << ", window "
           << r["window"].get<int>() << "\n  dims:";
      for (const json& d : r["dims"]) out_ << " " << d[0].get<int>() << ":" << d[1].get<int>();
      out_ << "\n  nonzero degrees " << vec(r["nonzero_degrees"]) << "\n  sparse " << yes(r["sparse"]) << "\n";
    } else if (kind == "selftest") {
      out_ << "  " << r["target"].get<std::string>() << " seed " << r["seed"].get<std::uint64_t>() << ": "
           << r["agree"].get<int>() << "/" << r["candidates"].get<int>() << " agree, "
           << r["distinguished"].get<int>() << " distinguished\n";
      for (const json& d : r["disagreements"])
        out_ << "  disagreement at candidate " << d["candidate"].get<int>() << " (" << d["kind"].get<std::string>()
             << ")\n";
    }
  }

  std::ostringstream out_;

 private:
  static std::string pad(const std::string& s, std::size_t w) {
    return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
  }

  int p_;
};

}  // namespace

std::string render_text(const json& report) {
  const int p = report["ring"]["p"].get<int>();
  Renderer r(p);
  r.out_ << "ring p=" << p << " m=" << report["ring"]["m"].get<int>() << "\n";
  for (const json& o : report["objects"]) {
    if (o["kind"] == "module") {
      r.out_ << "module " << o["name"].get<std::string>() << " = " << vec(o["blocks"]) << " dim "
             << o["dim"].get<int>() << (o["projective"].get<bool>() ? " (projective)" : "") << "\n";
    } else {
      r.map("map " + o["name"].get<std::string>(), o, "");
    }
  }
  for (const json& res : report["results"]) r.result(res);
  return r.out_.str();
}

}  // namespace stmtoda
