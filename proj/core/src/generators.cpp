#include "sublin/generators.hpp"

#include <charconv>
#include <vector>

#include "sublin/errors.hpp"

namespace sublin {

PlanarKind parse_planar_kind(std::string_view name) {
  if (name == "chain") return PlanarKind::chain;
  if (name == "grid") return PlanarKind::grid;
  if (name == "tree") return PlanarKind::tree;
  throw InputError("unknown planar kind '" + std::string(name) + "' (chain|grid|tree)");
}

std::string_view to_string(PlanarKind kind) {
  switch (kind) {
    case PlanarKind::chain:
      return "chain";
    case PlanarKind::grid:
      return "grid";
    case PlanarKind::tree:
      return "tree";
  }
  return "?";
}

void parse_size(std::string_view text, std::uint32_t& width, std::uint32_t& height) {
  auto number = [&](std::string_view part) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || v == 0) {
      throw InputError("bad size '" + std::string(text) + "'");
    }
    return v;
  };
  const auto x = text.find('x');
  if (x == std::string_view::npos) {
    width = number(text);
    height = 1;
  } else {
    width = number(text.substr(0, x));
    height = number(text.substr(x + 1));
  }
}

namespace {

Literal lit(Var v, bool all_positive, std::mt19937_64& rng) {
  return Literal(v, all_positive ? false : (rng() & 1u) != 0);
}

}  // namespace

GeneratedInstance gen_planar_instance(const PlanarOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::vector<std::vector<Literal>> clauses;
  GeneratedInstance out;
  Var n = 0;
  switch (o.kind) {
    case PlanarKind::chain: {
      n = o.width;
      for (Var i = 1; i < n; ++i) {
        const Literal a = lit(i, o.all_positive, rng);
        clauses.push_back({a, lit(i + 1, o.all_positive, rng)});
      }
      out.certificate = "chain of " + std::to_string(n) + " variables: incidence graph is a path";
      break;
    }
    case PlanarKind::grid: {
      const std::uint32_t w = o.width;
      const std::uint32_t h = o.height;
      n = w * h;
      auto at = [&](std::uint32_t r, std::uint32_t c) { return static_cast<Var>(r * w + c + 1); };
      for (std::uint32_t r = 0; r < h; ++r) {
        for (std::uint32_t c = 0; c < w; ++c) {
          if (c + 1 < w) {
            const Literal a = lit(at(r, c), o.all_positive, rng);
            clauses.push_back({a, lit(at(r, c + 1), o.all_positive, rng)});
          }
          if (r + 1 < h) {
            const Literal a = lit(at(r, c), o.all_positive, rng);
            clauses.push_back({a, lit(at(r + 1, c), o.all_positive, rng)});
          }
        }
      }
      std::uint32_t faces = 0;
      std::uint32_t units = 0;
      if (o.extras) {
        for (std::uint32_t r = 0; r + 1 < h; ++r) {
          for (std::uint32_t c = 0; c + 1 < w; ++c) {
            if (draw(rng, 4) != 0) continue;
            // Three corners of the face, skipping one at random.
            const Var corners[4] = {at(r, c), at(r, c + 1), at(r + 1, c + 1), at(r + 1, c)};
            const auto skip = draw(rng, 4);
            std::vector<Literal> clause;
            for (std::uint32_t i = 0; i < 4; ++i)
              if (i != skip) clause.push_back(lit(corners[i], o.all_positive, rng));
            clauses.push_back(std::move(clause));
            ++faces;
          }
        }
        for (Var v = 1; v <= n; ++v) {
          if (draw(rng, 8) != 0) continue;
          clauses.push_back({lit(v, o.all_positive, rng)});
          ++units;
        }
      }
      out.certificate = "grid " + std::to_string(w) + "x" + std::to_string(h) +
                        ": subdivided grid, " + std::to_string(faces) +
                        " 3-clauses each drawn inside its own face, " + std::to_string(units) +
                        " pendant unit clauses";
      break;
    }
    case PlanarKind::tree: {
      n = o.width;
      std::uint32_t units = 0;
      for (Var i = 2; i <= n; ++i) {
        const Var p = static_cast<Var>(draw(rng, i - 1) + 1);
        const Literal a = lit(p, o.all_positive, rng);
        clauses.push_back({a, lit(i, o.all_positive, rng)});
      }
      if (o.extras) {
        for (Var v = 1; v <= n; ++v) {
          if (draw(rng, 8) != 0) continue;
          clauses.push_back({lit(v, o.all_positive, rng)});
          ++units;
        }
      }
      out.certificate = "tree on " + std::to_string(n) + " variables with " + std::to_string(units) +
                        " pendant unit clauses: incidence graph is acyclic";
      break;
    }
  }
  out.formula = Formula(n, clauses);
  return out;
}

Formula random_cnf(Var n, std::uint32_t m, std::uint32_t width, std::mt19937_64& rng) {
  if (width > n) throw InputError("clause width exceeds variable count");
  std::vector<std::vector<Literal>> clauses;
  clauses.reserve(m);
  std::vector<Var> pool(n);
  for (std::uint32_t j = 0; j < m; ++j) {
    for (Var v = 0; v < n; ++v) pool[v] = v + 1;
    std::vector<Literal> clause;
    for (std::uint32_t i = 0; i < width; ++i) {
      const auto pick = static_cast<std::size_t>(i + draw(rng, n - i));
      std::swap(pool[i], pool[pick]);
      clause.emplace_back(pool[i], (rng() & 1u) != 0);
    }
    clauses.push_back(std::move(clause));
  }
  return Formula(n, clauses);
}

}  // namespace sublin
