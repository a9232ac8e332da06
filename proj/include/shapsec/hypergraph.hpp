#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapsec/coalition.hpp"

namespace shapsec {

struct HyperEdge {
  std::vector<Player> vertices;  // sorted, unique, non-empty
  double weight = 0.0;
};

// Weighted hypergraph on vertices 0..n-1. Duplicate edges are merged by
// summing their weights.
class Hypergraph {
 public:
  explicit Hypergraph(int n);

  void add_edge(std::vector<Player> vertices, double weight);

  int vertex_count() const { return n_; }
  const std::vector<HyperEdge>& edges() const { return edges_; }

  // Weighted degree d(i).
  double degree(Player v) const;

  // Copy with `count` isolated vertices appended.
  Hypergraph with_padding(int count) const;

 private:
  int n_;
  std::vector<HyperEdge> edges_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& detail, const std::string& source = {})
      : std::runtime_error((source.empty() ? "" : source + ":") + "line " + std::to_string(line) +
                           ": " + detail),
        line_(line),
        detail_(detail) {}
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  std::string detail_;
};

// Text format: `#` comments; first data line `n <count>`; then one edge per
// line as `weight v1 v2 ... vk` with 0-based vertex ids.
Hypergraph parse_hypergraph(std::istream& in);
Hypergraph load_hypergraph(const std::filesystem::path& path);

}  // namespace shapsec
