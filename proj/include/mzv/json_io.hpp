#pragma once

// Versioned JSON documents for LinComb and Tensor2 (schemas under schemas/).

#include "json.hpp"
#include "mzv/words.hpp"

namespace mzv {

inline nlohmann::json field_to_json(const FieldSpec& f) {
  return {{"p", f.p()}, {"k", f.k()}, {"q", f.q()}};
}

inline void check_json_field(const FieldSpec& f, const nlohmann::json& j) {
  if (!j.contains("field")) throw std::invalid_argument("JSON document missing \"field\"");
  const auto& jf = j["field"];
  if (jf.at("p").get<u64>() != f.p() || jf.at("k").get<u64>() != f.k())
    throw std::invalid_argument("JSON document field F_" + jf.at("q").dump() + " does not match expected F_" + std::to_string(f.q()));
}

inline nlohmann::json to_json(const LinComb& x) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [w, c] : x.terms())
    terms.push_back({{"coeff", c.v}, {"word", w.letters()}});
  return {{"format", "mzv.lincomb/1"}, {"field", field_to_json(x.field())}, {"terms", terms}};
}

inline LinComb lincomb_from_json(const FieldSpec& f, const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "mzv.lincomb/1")
    throw std::invalid_argument("unexpected JSON format tag " + j.at("format").dump());
  check_json_field(f, j);
  LinComb r(f);
  for (const auto& t : j.at("terms"))
    r.add_term(Word(t.at("word").get<std::vector<u32>>()), f.from_packed(t.at("coeff").get<u64>()));
  return r;
}

inline nlohmann::json to_json(const Tensor2& x) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, c] : x.terms())
    terms.push_back({{"coeff", c.v}, {"left", k.first.letters()}, {"right", k.second.letters()}});
  return {{"format", "mzv.tensor2/1"}, {"field", field_to_json(x.field())}, {"terms", terms}};
}

inline Tensor2 tensor2_from_json(const FieldSpec& f, const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "mzv.tensor2/1")
    throw std::invalid_argument("unexpected JSON format tag " + j.at("format").dump());
  check_json_field(f, j);
  Tensor2 r(f);
  for (const auto& t : j.at("terms"))
    r.add_term(Word(t.at("left").get<std::vector<u32>>()), Word(t.at("right").get<std::vector<u32>>()),
               f.from_packed(t.at("coeff").get<u64>()));
  return r;
}

}  // namespace mzv
