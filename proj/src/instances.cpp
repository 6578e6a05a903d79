// SPDX-License-Identifier: Apache-2.0
#include "qbb/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qbb/rng.hpp"

namespace qbb {

namespace {

// One clause penalty: E = sum(vars) - parity - sum_t aux_weight[t] * w_t,
// squared and expanded with x^2 = x. Coefficients land in `terms`.
void append_clause_terms(std::vector<Term>& terms, double& offset,
                         const std::vector<int>& clause_vars, int parity,
                         const std::vector<int>& aux_vars,
                         const std::vector<int>& aux_weights) {
  std::vector<std::pair<int, double>> lin;  // (variable, coefficient in E)
  lin.reserve(clause_vars.size() + aux_vars.size());
  for (int v : clause_vars) lin.emplace_back(v, 1.0);
  for (std::size_t t = 0; t < aux_vars.size(); ++t) {
    lin.emplace_back(aux_vars[t], -static_cast<double>(aux_weights[t]));
  }
  const double c0 = -static_cast<double>(parity);
  for (std::size_t a = 0; a < lin.size(); ++a) {
    terms.push_back({lin[a].first, lin[a].first,
                     lin[a].second * lin[a].second + 2.0 * c0 * lin[a].second});
    for (std::size_t b = a + 1; b < lin.size(); ++b) {
      terms.push_back({lin[a].first, lin[b].first, 2.0 * lin[a].second * lin[b].second});
    }
  }
  offset += c0 * c0;
}

}  // namespace

PlantedInstance gen_xorsat(int n_core, int k, int r, std::uint64_t seed) {
  if (k != 3 && k != 5) throw std::invalid_argument("gen_xorsat: k must be 3 or 5");
  if (n_core < k) throw std::invalid_argument("gen_xorsat: n_core must be at least k");
  if (r < 1) throw std::invalid_argument("gen_xorsat: r must be positive");
  if ((static_cast<long long>(n_core) * r) % k != 0) {
    throw std::invalid_argument("gen_xorsat: n_core * r must be divisible by k");
  }
  const int m = static_cast<int>(static_cast<long long>(n_core) * r / k);
  const std::vector<int> aux_weights = k == 3 ? std::vector<int>{2}
                                              : std::vector<int>{2, 4};
  const int aux_per_clause = static_cast<int>(aux_weights.size());

  Rng rng(seed);
  PlantedInstance inst;
  inst.n_core = n_core;
  inst.k = k;
  inst.r = r;
  inst.seed = seed;
  inst.planted.resize(n_core);
  for (int v = 0; v < n_core; ++v) {
    inst.planted[v] = static_cast<std::uint8_t>(rng.below(2));
  }

  // Configuration model: r stubs per variable, shuffled and chopped into
  // clauses of k. Degenerate pairings are rejected and redrawn.
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n_core) * r);
  for (int v = 0; v < n_core; ++v) {
    for (int c = 0; c < r; ++c) stubs.push_back(v);
  }

  constexpr int kMaxAttempts = 10000;
  bool ok = false;
  for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
    rng.shuffle(stubs);
    inst.clauses.clear();
    std::set<std::vector<int>> seen;
    ok = true;
    for (int c = 0; c < m && ok; ++c) {
      std::vector<int> vars(stubs.begin() + static_cast<std::ptrdiff_t>(c) * k,
                            stubs.begin() + static_cast<std::ptrdiff_t>(c + 1) * k);
      std::sort(vars.begin(), vars.end());
      if (std::adjacent_find(vars.begin(), vars.end()) != vars.end()) ok = false;
      else if (!seen.insert(vars).second) ok = false;
      else inst.clauses.push_back({std::move(vars), 0});
    }
  }
  if (!ok) {
    throw std::runtime_error(
        "gen_xorsat: could not draw a simple r-regular pairing for n_core=" +
        std::to_string(n_core) + " k=" + std::to_string(k) + " r=" + std::to_string(r));
  }

  const int n_total = n_core + m * aux_per_clause;
  inst.planted.resize(n_total);

  std::vector<Term> terms;
  double offset = 0.0;
  for (int c = 0; c < m; ++c) {
    XorsatClause& clause = inst.clauses[c];
    int sum = 0;
    for (int v : clause.vars) sum += inst.planted[v];
    clause.parity = sum & 1;

    std::vector<int> aux(aux_per_clause);
    for (int t = 0; t < aux_per_clause; ++t) aux[t] = n_core + c * aux_per_clause + t;
    append_clause_terms(terms, offset, clause.vars, clause.parity, aux, aux_weights);

    // Slack bits that make the planted assignment hit the clause minimum:
    // residual = sum - parity is even and equals the weighted aux sum.
    const int residual = sum - clause.parity;
    if (k == 3) {
      inst.planted[aux[0]] = residual == 2;
    } else {
      inst.planted[aux[0]] = residual == 2;
      inst.planted[aux[1]] = residual == 4;
    }
  }

  inst.model = QuboModel(n_total, std::move(terms), offset);
  return inst;
}

QuboModel gen_random(int n, double density, int coef_range, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_random: n must be positive");
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument("gen_random: density must be in (0, 1]");
  }
  if (coef_range < 1) throw std::invalid_argument("gen_random: coef_range must be >= 1");

  Rng rng(seed);
  const auto draw_coef = [&]() {
    // Nonzero integer in [-coef_range, coef_range].
    long long c = static_cast<long long>(rng.below(2ull * coef_range)) - coef_range;
    if (c >= 0) ++c;
    return static_cast<double>(c);
  };

  std::vector<Term> terms;
  for (int i = 0; i < n; ++i) {
    if (rng.uniform01() < density) terms.push_back({i, i, draw_coef()});
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform01() < density) terms.push_back({i, j, draw_coef()});
    }
  }
  return QuboModel(n, std::move(terms), 0.0);
}

void save_model(const QuboModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_model: cannot open " + path.string());
  out << model.num_vars() << ' ' << model.num_terms() << '\n';
  char buf[64];
  for (const Term& t : model.terms()) {
    std::snprintf(buf, sizeof(buf), "%.17g", t.coef);
    out << t.i << ' ' << t.j << ' ' << buf << '\n';
  }
  if (model.offset() != 0.0) {
    std::snprintf(buf, sizeof(buf), "%.17g", model.offset());
    out << "offset " << buf << '\n';
  }
  if (!out.flush()) throw std::runtime_error("save_model: write failed for " + path.string());
}

QuboModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_model: cannot open " + path.string());

  const auto fail = [&](int line_no, const std::string& what) -> ParseError {
    return ParseError(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };

  std::string line;
  int line_no = 0;
  int n = -1;
  long long nnz = -1;
  long long seen = 0;
  bool have_offset = false;
  double offset = 0.0;
  std::vector<Term> terms;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ' || sv.back() == '\t')) {
      sv.remove_suffix(1);
    }
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
    if (sv.empty() || sv.front() == '#') continue;

    std::istringstream fields{std::string(sv)};
    if (n < 0) {
      if (!(fields >> n >> nnz) || !(fields >> std::ws).eof()) {
        throw fail(line_no, "expected header \"n nnz\"");
      }
      if (n < 1) throw fail(line_no, "variable count must be positive");
      if (nnz < 0) throw fail(line_no, "negative term count");
      terms.reserve(static_cast<std::size_t>(nnz));
      continue;
    }
    if (seen < nnz) {
      Term t;
      if (!(fields >> t.i >> t.j >> t.coef) || !(fields >> std::ws).eof()) {
        throw fail(line_no, "expected \"i j coef\"");
      }
      if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n) {
        throw fail(line_no, "index out of range");
      }
      if (t.i > t.j) throw fail(line_no, "expected i <= j");
      if (!std::isfinite(t.coef)) throw fail(line_no, "non-finite coefficient");
      terms.push_back(t);
      ++seen;
      continue;
    }
    std::string word;
    if (have_offset || !(fields >> word) || word != "offset" ||
        !(fields >> offset) || !(fields >> std::ws).eof()) {
      throw fail(line_no, "unexpected trailing line");
    }
    if (!std::isfinite(offset)) throw fail(line_no, "non-finite offset");
    have_offset = true;
  }
  if (n < 0) throw fail(line_no + 1, "missing header \"n nnz\"");
  if (seen < nnz) {
    throw fail(line_no + 1, "expected " + std::to_string(nnz) + " terms, found " +
                                std::to_string(seen));
  }
  return QuboModel(n, std::move(terms), offset);
}

}  // namespace qbb
