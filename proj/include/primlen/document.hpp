#pragma once

// JSON form of a decomposition ("primlen/1"). Expressions are stored as
// canonical text; each elementary factor lists only the generators it moves.

#include <string>
#include <variant>

#include "json.hpp"

#include "primlen/error.hpp"
#include "primlen/field.hpp"
#include "primlen/format.hpp"
#include "primlen/liedecomp.hpp"
#include "primlen/parse.hpp"
#include "primlen/polyauto.hpp"
#include "primlen/polydecomp.hpp"

namespace primlen {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "primlen/1";
inline constexpr const char* kPolyAlgebra = "polynomial";
inline constexpr const char* kLieAlgebra = "metabelian-lie";

/// The document is structurally wrong: missing keys, wrong types, bad names.
class DocumentError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline Json images_json(const std::vector<std::pair<std::size_t, std::string>>& images) {
  Json obj = Json::object();
  for (const auto& [j, text] : images) obj[variable_name(j)] = text;
  return obj;
}

inline Json factor_json(const ElementaryPolyAuto& a) {
  const auto d = arity(a);
  const auto f = field_of(a);
  const auto imgs = images(a);
  std::vector<std::pair<std::size_t, std::string>> moved;
  for (std::size_t j = 0; j < d; ++j) {
    if (!(imgs[j] == Polynomial::variable(d, f, j))) moved.emplace_back(j, to_string(imgs[j]));
  }
  const char* type = std::holds_alternative<AffineAuto>(a) ? "affine" : "triangular";
  return Json{{"type", type}, {"images", images_json(moved)}};
}

inline Json factor_json(const ElementaryLieAuto& a) {
  if (auto* in = std::get_if<InnerLie>(&a)) return Json{{"type", "inner"}, {"v", to_string(in->v)}};
  const auto d = arity(a);
  const auto f = field_of(a);
  const auto e = endomorphism(a);
  std::vector<std::pair<std::size_t, std::string>> moved;
  for (std::size_t j = 0; j < d; ++j) {
    if (!(e.images[j] == LieElement::generator(d, f, j))) moved.emplace_back(j, to_string(e.images[j]));
  }
  if (auto* t = std::get_if<TriangularLie>(&a)) {
    Json order = Json::array();
    for (auto j : t->order) order.push_back(variable_name(j));
    return Json{{"type", "triangular"}, {"order", order}, {"images", images_json(moved)}};
  }
  return Json{{"type", "linear"}, {"images", images_json(moved)}};
}

template <class Certificate>
Json certificate_json(const Certificate& c) {
  Json chain = Json::array();
  for (const auto& a : c.chain) chain.push_back(factor_json(a));
  return Json{{"generator", variable_name(c.generator)}, {"chain", chain}};
}

inline Json ops_json(const OpCounter& ops) {
  return Json{{"multiplications", ops.multiplications},
              {"divisions", ops.divisions},
              {"additions", ops.additions}};
}

}  // namespace detail

inline Json to_json(const PolyDecomposition& dec) {
  const auto& f = dec.input;
  Json doc;
  doc["version"] = kSchemaVersion;
  doc["algebra"] = kPolyAlgebra;
  doc["field"] = f.field().to_string();
  doc["arity"] = f.arity();
  doc["input"] = to_string(f);
  doc["status"] = dec.status == DecompositionStatus::Finite ? "finite" : "infinite";
  doc["bound"] = dec.bound ? Json(*dec.bound) : Json(nullptr);
  if (!dec.note.empty()) doc["note"] = dec.note;
  Json summands = Json::array();
  for (const auto& s : dec.summands) {
    summands.push_back(Json{{"summand", to_string(s.summand)},
                            {"certificate", detail::certificate_json(s.certificate)}});
  }
  doc["summands"] = std::move(summands);
  doc["stats"] = Json{{"count", dec.summands.size()},
                      {"degree", f.is_zero() ? Json(nullptr) : Json(f.total_degree())},
                      {"ops", detail::ops_json(dec.ops)}};
  return doc;
}

inline Json to_json(const LieDecomposition& dec) {
  const auto& f = dec.input;
  Json doc;
  doc["version"] = kSchemaVersion;
  doc["algebra"] = kLieAlgebra;
  doc["field"] = f.field().to_string();
  doc["arity"] = f.arity();
  doc["input"] = to_string(f);
  doc["status"] = "finite";
  doc["bound"] = dec.bound;
  if (!dec.note.empty()) doc["note"] = dec.note;
  Json summands = Json::array();
  for (const auto& s : dec.summands) {
    summands.push_back(Json{{"summand", to_string(s.summand)},
                            {"certificate", detail::certificate_json(s.certificate)}});
  }
  doc["summands"] = std::move(summands);
  doc["stats"] = Json{{"count", dec.summands.size()},
                      {"degree", f.is_zero() ? Json(nullptr) : Json(f.degree())}};
  return doc;
}

namespace detail {

inline const Json& member(const Json& obj, const char* key) {
  if (!obj.is_object()) throw DocumentError(std::string("expected an object holding '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) throw DocumentError(std::string("missing key '") + key + "'");
  return *it;
}

inline std::string text(const Json& obj, const char* key) {
  const auto& v = member(obj, key);
  if (!v.is_string()) throw DocumentError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::size_t generator_index(const std::string& name, std::size_t d) {
  if (name.size() < 2 || name[0] != 'x' || name[1] == '0' || name.size() > 10 ||
      name.find_first_not_of("0123456789", 1) != std::string::npos) {
    throw DocumentError("bad generator name '" + name + "'");
  }
  const auto i = std::stoul(name.substr(1));
  if (i > d) throw DocumentError("generator " + name + " exceeds the arity");
  return i - 1;
}

template <class Parse>
auto parse_field(const std::string& src, const char* what, Parse parse) {
  try {
    return parse(src);
  } catch (const ParseError& e) {
    throw DocumentError(std::string(what) + ": " + e.what());
  }
}

inline ElementaryPolyAuto load_poly_factor(const Json& j, std::size_t d, const FieldDescriptor& f) {
  const auto type = text(j, "type");
  const auto& imgs = member(j, "images");
  if (!imgs.is_object()) throw DocumentError("'images' must be an object");
  const auto parse = [&](const std::string& s) { return parse_poly(s, d, f); };
  if (type == "affine") {
    AffineAuto a = affine_identity(d, f);
    for (const auto& [name, value] : imgs.items()) {
      const auto k = generator_index(name, d);
      if (!value.is_string()) throw DocumentError("image of " + name + " must be a string");
      const Polynomial img = parse_field(value.get<std::string>(), "image", parse);
      if (img.total_degree() > 1) throw DocumentError("affine image of " + name + " is not affine");
      for (std::size_t i = 0; i < d; ++i) a.matrix(i, k) = img.coefficient(Monomial::variable(d, i));
      a.shift[k] = img.coefficient(Monomial(d));
    }
    return a;
  }
  if (type == "triangular") {
    TriangularAuto t{std::vector<FieldScalar>(d, FieldScalar::one(f)), std::vector<Polynomial>(d, Polynomial(d, f))};
    for (const auto& [name, value] : imgs.items()) {
      const auto k = generator_index(name, d);
      if (!value.is_string()) throw DocumentError("image of " + name + " must be a string");
      Polynomial img = parse_field(value.get<std::string>(), "image", parse);
      const auto xk = Monomial::variable(d, k);
      t.scales[k] = img.coefficient(xk);
      img.add_term(xk, -t.scales[k]);
      t.tails[k] = std::move(img);
    }
    return t;
  }
  throw DocumentError("unknown polynomial factor type '" + type + "'");
}

inline ElementaryLieAuto load_lie_factor(const Json& j, std::size_t d, const FieldDescriptor& f) {
  const auto type = text(j, "type");
  const auto parse = [&](const std::string& s) { return parse_lie(s, d, f); };
  if (type == "inner") return InnerLie{parse_field(text(j, "v"), "inner parameter", parse)};
  const auto& imgs = member(j, "images");
  if (!imgs.is_object()) throw DocumentError("'images' must be an object");
  if (type == "linear") {
    DenseMatrix m = DenseMatrix::identity(d, f);
    for (const auto& [name, value] : imgs.items()) {
      const auto k = generator_index(name, d);
      if (!value.is_string()) throw DocumentError("image of " + name + " must be a string");
      const LieElement img = parse_field(value.get<std::string>(), "image", parse);
      if (img.degree() > 1) throw DocumentError("linear image of " + name + " is not linear");
      for (std::size_t i = 0; i < d; ++i) m(i, k) = img.linear_coefficient(i);
    }
    return LinearLie{std::move(m)};
  }
  if (type == "triangular") {
    const auto& order = member(j, "order");
    if (!order.is_array()) throw DocumentError("'order' must be an array");
    TriangularLie t{{}, std::vector<FieldScalar>(d, FieldScalar::one(f)), std::vector<LieElement>(d, LieElement(d, f))};
    for (const auto& name : order) {
      if (!name.is_string()) throw DocumentError("'order' entries must be strings");
      t.order.push_back(generator_index(name.get<std::string>(), d));
    }
    for (const auto& [name, value] : imgs.items()) {
      const auto k = generator_index(name, d);
      if (!value.is_string()) throw DocumentError("image of " + name + " must be a string");
      LieElement img = parse_field(value.get<std::string>(), "image", parse);
      t.scales[k] = img.linear_coefficient(k);
      img -= LieElement::generator(d, f, k) * t.scales[k];
      t.tails[k] = std::move(img);
    }
    return t;
  }
  throw DocumentError("unknown Lie factor type '" + type + "'");
}

template <class Certificate, class LoadFactor>
Certificate load_certificate(const Json& j, std::size_t d, LoadFactor load) {
  Certificate c;
  c.generator = generator_index(text(j, "generator"), d);
  const auto& chain = member(j, "chain");
  if (!chain.is_array()) throw DocumentError("'chain' must be an array");
  for (const auto& factor : chain) c.chain.push_back(load(factor));
  return c;
}

// A document built in memory may hold non-negative values as signed integers.
inline bool is_count(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

inline std::uint64_t unsigned_member(const Json& obj, const char* key) {
  const auto& v = member(obj, key);
  if (!is_count(v)) throw DocumentError(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace detail

using LoadedDecomposition = std::variant<PolyDecomposition, LieDecomposition>;

/// Rebuilds the decomposition a document describes. Throws DocumentError
/// when the document cannot be read.
inline LoadedDecomposition load_document(const Json& doc) {
  using namespace detail;
  if (text(doc, "version") != kSchemaVersion) throw DocumentError("unsupported document version");
  const auto algebra = text(doc, "algebra");
  FieldDescriptor f;
  try {
    f = FieldDescriptor::parse(text(doc, "field"));
  } catch (const InvalidArgument& e) {
    throw DocumentError(e.what());
  }
  const auto d = unsigned_member(doc, "arity");
  if (d == 0 || d > 64) throw DocumentError("arity out of range");
  const auto status = text(doc, "status");
  if (status != "finite" && status != "infinite") throw DocumentError("bad status '" + status + "'");
  const auto& bound = member(doc, "bound");
  const auto& summands = member(doc, "summands");
  if (!summands.is_array()) throw DocumentError("'summands' must be an array");

  if (algebra == kPolyAlgebra) {
    const auto parse = [&](const std::string& s) { return parse_poly(s, d, f); };
    PolyDecomposition dec;
    dec.input = parse_field(text(doc, "input"), "input", parse);
    dec.status = status == "finite" ? DecompositionStatus::Finite : DecompositionStatus::Infinite;
    if (bound.is_null()) {
      dec.bound = std::nullopt;
    } else if (detail::is_count(bound)) {
      dec.bound = bound.get<std::uint64_t>();
    } else {
      throw DocumentError("'bound' must be a non-negative integer or null");
    }
    for (const auto& s : summands) {
      PolySummand ps{parse_field(text(s, "summand"), "summand", parse),
                     load_certificate<PolyCertificate>(member(s, "certificate"), d, [&](const Json& j) {
                       return load_poly_factor(j, d, f);
                     })};
      dec.summands.push_back(std::move(ps));
    }
    return dec;
  }
  if (algebra == kLieAlgebra) {
    if (status != "finite") throw DocumentError("Lie documents are always finite");
    if (!detail::is_count(bound)) throw DocumentError("'bound' must be a non-negative integer");
    const auto parse = [&](const std::string& s) { return parse_lie(s, d, f); };
    LieDecomposition dec{parse_field(text(doc, "input"), "input", parse), {}, bound.get<std::uint64_t>(), {}};
    for (const auto& s : summands) {
      LieSummand ls{parse_field(text(s, "summand"), "summand", parse),
                    load_certificate<LieCertificate>(member(s, "certificate"), d, [&](const Json& j) {
                      return load_lie_factor(j, d, f);
                    })};
      dec.summands.push_back(std::move(ls));
    }
    return dec;
  }
  throw DocumentError("unknown algebra '" + algebra + "'");
}

struct DocumentCheck {
  bool ok = true;
  std::string diagnostic;
  std::size_t summands = 0;
};

/// Loads and verifies a document. Structural problems throw; a readable
/// document that fails verification returns ok = false.
inline DocumentCheck verify_document(const Json& doc) {
  const auto loaded = load_document(doc);
  DocumentCheck out;
  std::visit(
      [&](const auto& dec) {
        using T = std::decay_t<decltype(dec)>;
        out.summands = dec.summands.size();
        if constexpr (std::is_same_v<T, PolyDecomposition>) {
          const auto r = verify(dec);
          out.ok = r.ok;
          out.diagnostic = r.diagnostic;
        } else {
          const auto r = verify_lie(dec);
          out.ok = r.ok;
          out.diagnostic = r.diagnostic;
        }
      },
      loaded);
  if (out.ok) {
    const auto& stats = detail::member(doc, "stats");
    if (detail::unsigned_member(stats, "count") != out.summands) {
      out.ok = false;
      out.diagnostic = "stats count mismatch";
    }
  }
  return out;
}

}  // namespace primlen
