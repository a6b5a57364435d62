#include "ergomix/cli/channel_spec.hpp"

#include <cmath>
#include <sstream>

#include "ergomix/errors.hpp"
#include "ergomix/shift_demo.hpp"

namespace ergomix::cli {

namespace {

std::string child(const std::string& ptr, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return ptr + "/" + escaped;
}

std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

const Json& require(const Json& obj, const std::string& ptr, const char* key) {
  if (!obj.contains(key)) throw SpecError(child(ptr, key), std::string("missing required field '") + key + "'");
  return obj.at(key);
}

void expect_object(const Json& j, const std::string& ptr) {
  if (!j.is_object()) throw SpecError(ptr, "expected an object");
}

void expect_array(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw SpecError(ptr, "expected an array");
}

void reject_unknown(const Json& obj, const std::string& ptr, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SpecError(child(ptr, key), "unknown field '" + key + "'");
  }
}

double real_number(const Json& j, const std::string& ptr) {
  if (!j.is_number()) throw SpecError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SpecError(ptr, "number is not finite");
  return v;
}

int integer(const Json& j, const std::string& ptr, int lo) {
  if (!j.is_number_integer()) throw SpecError(ptr, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > 1'000'000) throw SpecError(ptr, "integer out of range (minimum " + std::to_string(lo) + ")");
  return static_cast<int>(v);
}

Complex complex_number(const Json& j, const std::string& ptr) {
  if (j.is_number()) return {real_number(j, ptr), 0.0};
  if (j.is_array() && j.size() == 2) return {real_number(j[0], child(ptr, 0)), real_number(j[1], child(ptr, 1))};
  throw SpecError(ptr, "expected a number or an [re, im] pair");
}

template <class Matrix, class Entry>
Matrix matrix(const Json& j, const std::string& ptr, Entry entry, std::optional<int> side) {
  expect_array(j, ptr);
  if (j.empty()) throw SpecError(ptr, "matrix has no rows");
  const auto rows = j.size();
  expect_array(j[0], child(ptr, 0));
  const auto cols = j[0].size();
  if (side && (static_cast<int>(rows) != *side || static_cast<int>(cols) != *side)) {
    throw SpecError(ptr, "matrix must be " + std::to_string(*side) + " x " + std::to_string(*side));
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = child(ptr, r);
    expect_array(j[r], rp);
    if (j[r].size() != cols) throw SpecError(rp, "row length differs from row 0");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = entry(j[r][c], child(rp, c));
  }
  return m;
}

Eigen::MatrixXcd complex_matrix(const Json& j, const std::string& ptr, std::optional<int> side = {}) {
  return matrix<Eigen::MatrixXcd>(j, ptr, complex_number, side);
}

Eigen::MatrixXd real_matrix(const Json& j, const std::string& ptr, std::optional<int> side = {}) {
  return matrix<Eigen::MatrixXd>(j, ptr, real_number, side);
}

AlgebraShape parse_algebra(const Json& j, const std::string& ptr) {
  expect_object(j, ptr);
  reject_unknown(j, ptr, {"blocks"});
  const std::string bp = child(ptr, "blocks");
  const Json& blocks = require(j, ptr, "blocks");
  expect_array(blocks, bp);
  if (blocks.empty()) throw SpecError(bp, "an algebra needs at least one block");
  std::vector<Block> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string p = child(bp, i);
    expect_object(blocks[i], p);
    reject_unknown(blocks[i], p, {"dim", "weight"});
    Block b;
    b.dim = integer(require(blocks[i], p, "dim"), child(p, "dim"), 1);
    if (blocks[i].contains("weight")) {
      b.weight = real_number(blocks[i]["weight"], child(p, "weight"));
      if (!(b.weight > 0.0)) throw SpecError(child(p, "weight"), "weight must be positive");
    }
    out.push_back(b);
  }
  return AlgebraShape(out);
}

Element parse_element(const AlgebraShape& s, const Json& j, const std::string& ptr) {
  expect_array(j, ptr);
  if (j.size() != s.block_count()) {
    throw SpecError(ptr, "element needs one matrix per block (" + std::to_string(s.block_count()) + ")");
  }
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t i = 0; i < s.block_count(); ++i) {
    blocks.push_back(complex_matrix(j[i], child(ptr, i), s.block(i).dim));
  }
  return Element(s, blocks);
}

SuperOperator parse_map(const AlgebraShape& s, const Json& j, const std::string& ptr) {
  expect_object(j, ptr);
  const std::string kp = child(ptr, "kind");
  const Json& kind_json = require(j, ptr, "kind");
  if (!kind_json.is_string()) throw SpecError(kp, "expected a string");
  const auto kind = parse_map_kind(kind_json.get<std::string>());
  if (!kind) throw SpecError(kp, "unknown map kind '" + kind_json.get<std::string>() + "'");

  try {
    switch (*kind) {
      case MapKind::kraus: {
        reject_unknown(j, ptr, {"kind", "operators"});
        const std::string op = child(ptr, "operators");
        const Json& ops = require(j, ptr, "operators");
        expect_array(ops, op);
        if (ops.empty()) throw SpecError(op, "at least one Kraus operator is required");
        std::vector<Eigen::MatrixXcd> ks;
        for (std::size_t a = 0; a < ops.size(); ++a) ks.push_back(complex_matrix(ops[a], child(op, a), s.hilbert_dim()));
        return from_kraus(s, ks);
      }
      case MapKind::transfer: {
        reject_unknown(j, ptr, {"kind", "matrix"});
        return from_transfer(s, real_matrix(require(j, ptr, "matrix"), child(ptr, "matrix"), s.real_dim()));
      }
      case MapKind::classical: {
        reject_unknown(j, ptr, {"kind", "matrix"});
        const std::string mp = child(ptr, "matrix");
        const Eigen::MatrixXd p = real_matrix(require(j, ptr, "matrix"), mp);
        if (p.rows() != p.cols()) throw SpecError(mp, "classical matrix must be square");
        if (!(s == AlgebraShape::diagonal(static_cast<int>(p.rows())))) {
          throw SpecError("/algebra", "a classical chain on n states needs n blocks of dim 1 and weight 1");
        }
        try {
          return from_classical(p);
        } catch (const DomainError& e) {
          throw SpecError(mp, e.what());
        }
      }
      case MapKind::depolarizing: {
        reject_unknown(j, ptr, {"kind", "lambda"});
        const double lambda = real_number(require(j, ptr, "lambda"), child(ptr, "lambda"));
        if (s.block_count() != 1 || std::abs(s.total_trace() - 1.0) > 1e-12) {
          throw SpecError("/algebra", "depolarizing map needs a single block with tau(1) = 1");
        }
        return from_depolarizing(s, lambda);
      }
      case MapKind::rank_one: {
        reject_unknown(j, ptr, {"kind", "y", "z"});
        const Element y = parse_element(s, require(j, ptr, "y"), child(ptr, "y"));
        const Element z = j.contains("z") ? parse_element(s, j["z"], child(ptr, "z")) : Element::identity(s);
        if (!is_self_adjoint(y)) throw SpecError(child(ptr, "y"), "y must be self-adjoint");
        if (!is_self_adjoint(z)) throw SpecError(child(ptr, "z"), "z must be self-adjoint");
        return rank_one(y, z);
      }
      case MapKind::shift_demo: {
        reject_unknown(j, ptr, {"kind", "dim", "trace_mode"});
        const int d = integer(require(j, ptr, "dim"), child(ptr, "dim"), 2);
        shift::TraceMode mode = shift::TraceMode::unit_weights;
        if (j.contains("trace_mode")) {
          const std::string mp = child(ptr, "trace_mode");
          if (!j["trace_mode"].is_string()) throw SpecError(mp, "expected a string");
          const auto m = j["trace_mode"].get<std::string>();
          if (m == "normalized") mode = shift::TraceMode::normalized;
          else if (m != "unit_weights") throw SpecError(mp, "trace_mode must be unit_weights or normalized");
        }
        const shift::TruncatedShift t = shift::build(d, mode);
        if (!(t.shape() == s)) throw SpecError("/algebra", "shift_demo needs the single block (dim, weight) of its trace mode");
        return t.superoperator();
      }
    }
  } catch (const ShapeMismatch& e) {
    throw SpecError(ptr, e.what());
  } catch (const DomainError& e) {
    throw SpecError(ptr, e.what());
  }
  throw SpecError(kp, "unsupported map kind");
}

AnalysisOverrides parse_analysis(const Json& j, const std::string& ptr) {
  expect_object(j, ptr);
  reject_unknown(j, ptr, {"tolerance", "n_max", "horizon", "audit_horizon", "seed"});
  AnalysisOverrides a;
  if (j.contains("tolerance")) {
    a.tolerance = real_number(j["tolerance"], child(ptr, "tolerance"));
    if (!(*a.tolerance > 0.0)) throw SpecError(child(ptr, "tolerance"), "tolerance must be positive");
  }
  if (j.contains("n_max")) a.n_max = integer(j["n_max"], child(ptr, "n_max"), 1);
  if (j.contains("horizon")) a.horizon = integer(j["horizon"], child(ptr, "horizon"), 1);
  if (j.contains("audit_horizon")) a.audit_horizon = integer(j["audit_horizon"], child(ptr, "audit_horizon"), 1);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw SpecError(child(ptr, "seed"), "seed must be a non-negative integer");
    a.seed = j["seed"].get<std::uint64_t>();
  }
  return a;
}

}  // namespace

ChannelSpec parse_channel_spec(const Json& doc) {
  expect_object(doc, "");
  reject_unknown(doc, "", {"schema", "algebra", "map", "analysis"});
  if (doc.contains("schema") && doc["schema"] != kChannelSpecSchema) {
    throw SpecError("/schema", std::string("unsupported schema; expected ") + kChannelSpecSchema);
  }
  const AlgebraShape s = parse_algebra(require(doc, "", "algebra"), "/algebra");
  SuperOperator t = parse_map(s, require(doc, "", "map"), "/map");
  AnalysisOverrides a;
  if (doc.contains("analysis")) a = parse_analysis(doc["analysis"], "/analysis");
  return ChannelSpec{doc, std::move(t), a};
}

ChannelSpec read_channel_spec(std::istream& in) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SpecError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_channel_spec(doc);
}

Json complex_matrix_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json real_matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Element& x) {
  Json out = Json::array();
  for (const auto& b : x.blocks()) out.push_back(complex_matrix_json(b));
  return out;
}

Json to_spec(const SuperOperator& t) {
  Json blocks = Json::array();
  for (const Block& b : t.shape().blocks()) blocks.push_back({{"dim", b.dim}, {"weight", b.weight}});
  Json map = std::visit(
      [&](const auto& r) -> Json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, KrausRecipe>) {
          Json ops = Json::array();
          for (const auto& k : r.operators) ops.push_back(complex_matrix_json(k));
          return {{"kind", "kraus"}, {"operators", ops}};
        } else if constexpr (std::is_same_v<R, ClassicalRecipe>) {
          return {{"kind", "classical"}, {"matrix", real_matrix_json(r.matrix)}};
        } else if constexpr (std::is_same_v<R, DepolarizingRecipe>) {
          return {{"kind", "depolarizing"}, {"lambda", r.lambda}};
        } else if constexpr (std::is_same_v<R, RankOneRecipe>) {
          return {{"kind", "rank_one"}, {"y", to_json(r.y)}, {"z", to_json(r.z)}};
        } else if constexpr (std::is_same_v<R, ShiftRecipe>) {
          return {{"kind", "shift_demo"}, {"dim", r.dim}, {"trace_mode", r.normalized ? "normalized" : "unit_weights"}};
        } else {
          return {{"kind", "transfer"}, {"matrix", real_matrix_json(t.transfer())}};
        }
      },
      t.recipe());
  return {{"schema", kChannelSpecSchema}, {"algebra", {{"blocks", blocks}}}, {"map", map}};
}

}  // namespace ergomix::cli
