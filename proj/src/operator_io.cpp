#include "celliptic/operator_io.hpp"

#include "celliptic/error.hpp"
#include "celliptic/operator_zoo.hpp"

#include <algorithm>
#include <fstream>

namespace celliptic {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd &m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json &j) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw ParseError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto &row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError("matrix rows have different lengths");
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[static_cast<std::size_t>(c)].is_number())
        throw ParseError("matrix entry is not a number");
      m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

template <typename T> T required(const json &j, const char *key) {
  if (!j.contains(key))
    throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

} // namespace

json operator_to_json(const Operator &op) {
  std::vector<const Operator::Terms::value_type *> ordered;
  for (const auto &term : op.terms())
    ordered.push_back(&term);
  std::sort(ordered.begin(), ordered.end(), [](auto *a, auto *b) {
    return graded_lex_index(a->first) < graded_lex_index(b->first);
  });
  json terms = json::array();
  for (const auto *term : ordered)
    terms.push_back({{"alpha", term->first}, {"matrix", matrix_to_json(term->second)}});
  return {{"n", op.n()},
          {"k", op.k()},
          {"dim_v", op.dim_v()},
          {"dim_w", op.dim_w()},
          {"terms", std::move(terms)}};
}

Operator operator_from_json(const json &j) {
  if (!j.is_object())
    throw ParseError("operator definition must be a JSON object");
  const int n = required<int>(j, "n");
  const int k = required<int>(j, "k");
  const int dim_v = required<int>(j, "dim_v");
  const int dim_w = required<int>(j, "dim_w");
  if (!j.contains("terms") || !j.at("terms").is_array())
    throw ParseError("missing array 'terms'");
  Operator::Terms terms;
  for (const auto &t : j.at("terms")) {
    auto alpha = required<MultiIndex>(t, "alpha");
    if (!t.contains("matrix"))
      throw ParseError("term without 'matrix'");
    Eigen::MatrixXd m = matrix_from_json(t.at("matrix"));
    auto [it, inserted] = terms.emplace(std::move(alpha), m);
    if (!inserted)
      it->second += m;
  }
  return Operator(n, k, dim_v, dim_w, std::move(terms));
}

Operator load_operator(const std::string &ref, int n, int k) {
  constexpr std::string_view prefix = "zoo:";
  if (ref.rfind(prefix, 0) == 0)
    return zoo::by_name(ref.substr(prefix.size()), n, k);
  std::ifstream in(ref);
  if (!in)
    throw ParseError("cannot open operator file '" + ref + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw ParseError("operator file '" + ref + "': " + e.what());
  }
  return operator_from_json(j);
}

json polynomial_to_json(const Polynomial &p) {
  json monos = json::array();
  for (const auto &alpha : cached_monomials_up_to(p.n(), p.degree_bound()))
    monos.push_back(alpha);
  return {{"n", p.n()},
          {"dim", p.dim()},
          {"degree_bound", p.degree_bound()},
          {"monomials", std::move(monos)},
          {"coeffs", matrix_to_json(p.coeffs())}};
}

Polynomial polynomial_from_json(const json &j) {
  const int n = required<int>(j, "n");
  const int dim = required<int>(j, "dim");
  const int degree = required<int>(j, "degree_bound");
  if (!j.contains("coeffs"))
    throw ParseError("polynomial without 'coeffs'");
  try {
    return Polynomial(n, dim, degree, matrix_from_json(j.at("coeffs")));
  } catch (const InvariantError &e) {
    throw ParseError(e.what());
  }
}

} // namespace celliptic
