#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wordwalks/common.hpp"
#include "wordwalks/digraph.hpp"
#include "wordwalks/graph.hpp"
#include "wordwalks/lamplighter.hpp"

// JSON schemas for the external interfaces: graph family specs, kernel
// specs, labelled digraphs, and lamplighter states.

namespace ww {

using Json = nlohmann::json;

// --- graph family specs -------------------------------------------------
// {"family":"lattice","d":2} | {"family":"homtree","M":3} | {"family":"oriented","q":2}

struct GraphSpec {
  enum class Family { Lattice, HomTreeFamily, Oriented };
  Family family = Family::Lattice;
  int param = 1;

  Json to_json() const {
    switch (family) {
      case Family::Lattice:
        return {{"family", "lattice"}, {"d", param}};
      case Family::HomTreeFamily:
        return {{"family", "homtree"}, {"M", param}};
      case Family::Oriented:
        return {{"family", "oriented"}, {"q", param}};
    }
    throw ValidationError("graph spec: bad family");
  }
};

inline GraphSpec parse_graph_spec(const Json& j) {
  require(j.is_object() && j.contains("family"), "graph spec: need a \"family\" field");
  std::string fam = j.at("family").get<std::string>();
  GraphSpec out;
  if (fam == "lattice") {
    require(j.contains("d"), "graph spec: lattice needs \"d\"");
    out.family = GraphSpec::Family::Lattice;
    out.param = j.at("d").get<int>();
  } else if (fam == "homtree") {
    require(j.contains("M"), "graph spec: homtree needs \"M\"");
    out.family = GraphSpec::Family::HomTreeFamily;
    out.param = j.at("M").get<int>();
  } else if (fam == "oriented") {
    require(j.contains("q"), "graph spec: oriented needs \"q\"");
    out.family = GraphSpec::Family::Oriented;
    out.param = j.at("q").get<int>();
  } else {
    throw ValidationError("graph spec: unknown family '" + fam + "'");
  }
  return out;
}

// shorthand "lattice:2" | "homtree:3" | "oriented:2"
inline GraphSpec parse_graph_shorthand(const std::string& s) {
  auto colon = s.find(':');
  require(colon != std::string::npos, "graph spec: expected family:param");
  std::string fam = s.substr(0, colon);
  int param = std::stoi(s.substr(colon + 1));
  Json j;
  if (fam == "lattice") {
    j = {{"family", "lattice"}, {"d", param}};
  } else if (fam == "homtree") {
    j = {{"family", "homtree"}, {"M", param}};
  } else if (fam == "oriented") {
    j = {{"family", "oriented"}, {"q", param}};
  } else {
    throw ValidationError("graph spec: unknown family '" + fam + "'");
  }
  return parse_graph_spec(j);
}

// --- kernel specs --------------------------------------------------------
// {"kind":"srw","graph":...} | {"kind":"biased","p":0.7} | {"kind":"oriented","q":2}
// {"kind":"wos","a":0.5,"lamp":"uniform","base":...} | {"kind":"sws","lamp":"uniform","base":...}

struct KernelSpec {
  enum class Kind { Srw, Biased, Oriented, Wos, Sws };
  Kind kind = Kind::Srw;
  GraphSpec graph;       // srw
  double p = 0.7;        // biased
  int q = 2;             // oriented
  double a = 0.5;        // wos mixing weight
  std::string lamp = "uniform";
  std::vector<KernelSpec> base;  // single element for wos/sws

  bool is_lamplighter() const { return kind == Kind::Wos || kind == Kind::Sws; }

  Json to_json() const {
    switch (kind) {
      case Kind::Srw:
        return {{"kind", "srw"}, {"graph", graph.to_json()}};
      case Kind::Biased:
        return {{"kind", "biased"}, {"p", p}};
      case Kind::Oriented:
        return {{"kind", "oriented"}, {"q", q}};
      case Kind::Wos:
        return {{"kind", "wos"}, {"a", a}, {"lamp", lamp}, {"base", base.at(0).to_json()}};
      case Kind::Sws:
        return {{"kind", "sws"}, {"lamp", lamp}, {"base", base.at(0).to_json()}};
    }
    throw ValidationError("kernel spec: bad kind");
  }
};

inline KernelSpec parse_kernel_spec(const Json& j) {
  require(j.is_object() && j.contains("kind"), "kernel spec: need a \"kind\" field");
  std::string kind = j.at("kind").get<std::string>();
  KernelSpec out;
  if (kind == "srw") {
    out.kind = KernelSpec::Kind::Srw;
    require(j.contains("graph"), "kernel spec: srw needs \"graph\"");
    out.graph = parse_graph_spec(j.at("graph"));
  } else if (kind == "biased") {
    out.kind = KernelSpec::Kind::Biased;
    require(j.contains("p"), "kernel spec: biased needs \"p\"");
    out.p = j.at("p").get<double>();
  } else if (kind == "oriented") {
    out.kind = KernelSpec::Kind::Oriented;
    require(j.contains("q"), "kernel spec: oriented needs \"q\"");
    out.q = j.at("q").get<int>();
  } else if (kind == "wos" || kind == "sws") {
    out.kind = kind == "wos" ? KernelSpec::Kind::Wos : KernelSpec::Kind::Sws;
    require(j.contains("base"), "kernel spec: lamplighter kernels need \"base\"");
    out.base.push_back(parse_kernel_spec(j.at("base")));
    require(!out.base[0].is_lamplighter(), "kernel spec: base must be a base-graph kernel");
    if (j.contains("lamp")) out.lamp = j.at("lamp").get<std::string>();
    require(out.lamp == "uniform", "kernel spec: only the uniform lamp kernel is exposed");
    if (out.kind == KernelSpec::Kind::Wos) {
      require(j.contains("a"), "kernel spec: wos needs \"a\"");
      out.a = j.at("a").get<double>();
    }
  } else {
    throw ValidationError("kernel spec: unknown kind '" + kind + "'");
  }
  return out;
}

// shorthand "srw" (graph given separately) | "biased:0.7" | "oriented:2"
inline KernelSpec parse_base_kernel_shorthand(const std::string& s,
                                              const std::string& graph_shorthand) {
  KernelSpec out;
  if (s == "srw") {
    require(!graph_shorthand.empty(), "kernel spec: srw needs --graph");
    out.kind = KernelSpec::Kind::Srw;
    out.graph = parse_graph_shorthand(graph_shorthand);
    return out;
  }
  auto colon = s.find(':');
  std::string head = colon == std::string::npos ? s : s.substr(0, colon);
  if (head == "biased") {
    require(colon != std::string::npos, "kernel spec: biased:p");
    out.kind = KernelSpec::Kind::Biased;
    out.p = std::stod(s.substr(colon + 1));
    return out;
  }
  if (head == "oriented") {
    require(colon != std::string::npos, "kernel spec: oriented:q");
    out.kind = KernelSpec::Kind::Oriented;
    out.q = std::stoi(s.substr(colon + 1));
    return out;
  }
  throw ValidationError("kernel spec: unknown shorthand '" + s + "'");
}

// --- labelled digraphs ----------------------------------------------------
// {"vertices": n, "alphabet": ["a","b"], "edges": [[src,"label",dst], ...]}

inline Json digraph_to_json(const LabeledDigraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    edges.push_back(Json::array({e.src, g.alphabet[e.label], e.dst}));
  }
  return {{"vertices", g.num_vertices}, {"alphabet", g.alphabet}, {"edges", edges}};
}

inline LabeledDigraph digraph_from_json(const Json& j) {
  require(j.is_object(), "digraph: expected a JSON object");
  require(j.contains("vertices") && j.contains("alphabet") && j.contains("edges"),
          "digraph: need \"vertices\", \"alphabet\", \"edges\"");
  int n = j.at("vertices").get<int>();
  std::vector<std::string> alphabet = j.at("alphabet").get<std::vector<std::string>>();
  LabeledDigraph g(n, alphabet, {});
  std::vector<LabeledDigraph::Edge> edges;
  for (const auto& e : j.at("edges")) {
    require(e.is_array() && e.size() == 3, "digraph: edges are [src, \"label\", dst]");
    int src = e.at(0).get<int>();
    std::string label = e.at(1).get<std::string>();
    int dst = e.at(2).get<int>();
    edges.push_back({src, g.label_index(label), dst});
  }
  return LabeledDigraph(n, std::move(alphabet), std::move(edges));
}

// --- vertex and state encodings -------------------------------------------

inline Json vertex_to_json(const LatticeGraph::vertex_type& v) { return Json(v); }
inline Json vertex_to_json(const std::string& v) { return Json(v); }
inline Json vertex_to_json(long long v) { return Json(v); }
inline Json vertex_to_json(const OrientedTree::Vertex& v) {
  return {{"spine", v.spine}, {"digits", v.digits}};
}

// {"position": <vertex encoding>, "lamps": [<vertex encodings>]}
template <class V>
Json lamp_state_to_json(const LampState<V>& s) {
  Json lamps = Json::array();
  for (const auto& v : s.lamps.support) lamps.push_back(vertex_to_json(v));
  return {{"position", vertex_to_json(s.position)}, {"lamps", lamps}};
}

}  // namespace ww
