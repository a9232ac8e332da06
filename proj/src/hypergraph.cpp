#include "shapsec/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace shapsec {

Hypergraph::Hypergraph(int n) : n_(n) {
  if (n < 1 || n > kMaxPlayers) {
    throw std::invalid_argument("hypergraph vertex count out of range: " + std::to_string(n));
  }
}

void Hypergraph::add_edge(std::vector<Player> vertices, double weight) {
  if (vertices.empty()) throw std::invalid_argument("hyperedge must be non-empty");
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("hyperedge weight must be finite and non-negative");
  }
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
    throw std::invalid_argument("hyperedge repeats a vertex");
  }
  if (vertices.front() < 0 || vertices.back() >= n_) {
    throw std::invalid_argument("hyperedge vertex outside [0, " + std::to_string(n_) + ")");
  }
  for (auto& e : edges_) {
    if (e.vertices == vertices) {
      e.weight += weight;
      return;
    }
  }
  edges_.push_back({std::move(vertices), weight});
}

double Hypergraph::degree(Player v) const {
  double d = 0.0;
  for (const auto& e : edges_) {
    if (std::binary_search(e.vertices.begin(), e.vertices.end(), v)) d += e.weight;
  }
  return d;
}

Hypergraph Hypergraph::with_padding(int count) const {
  if (count < 0) throw std::invalid_argument("padding count must be non-negative");
  Hypergraph h(n_ + count);
  h.edges_ = edges_;
  return h;
}

Hypergraph parse_hypergraph(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::optional<Hypergraph> graph;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;

    if (!graph) {
      int n = 0;
      if (first != "n" || !(fields >> n)) {
        throw ParseError(lineno, "expected `n <count>` before any edge");
      }
      std::string extra;
      if (fields >> extra) throw ParseError(lineno, "trailing token after vertex count");
      try {
        graph.emplace(n);
      } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
      }
      continue;
    }

    double weight = 0.0;
    try {
      std::size_t used = 0;
      weight = std::stod(first, &used);
      if (used != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      throw ParseError(lineno, "invalid edge weight `" + first + "`");
    }
    std::vector<Player> vertices;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        const long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        vertices.push_back(static_cast<Player>(v));
      } catch (const std::exception&) {
        throw ParseError(lineno, "invalid vertex id `" + tok + "`");
      }
    }
    try {
      graph->add_edge(std::move(vertices), weight);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (!graph) throw ParseError(lineno, "missing `n <count>` header");
  return *std::move(graph);
}

Hypergraph load_hypergraph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open hypergraph file " + path.string());
  try {
    return parse_hypergraph(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

}  // namespace shapsec
