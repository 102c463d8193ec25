#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nclb/linemod.hpp"
#include "nclb/presets.hpp"

namespace nclb {

struct LoadedPreset {
  PresPtr pres;
  std::vector<std::pair<std::string, LineModuleData>> modules;
};

namespace detail {

// Splits a word string on generator names, longest name first; spaces
// separate letters but are not required.
inline Word word_from_text(const std::vector<std::string>& names, const std::string& text) {
  Word out;
  std::size_t p = 0;
  while (p < text.size()) {
    if (text[p] == ' ') {
      ++p;
      continue;
    }
    std::string best;
    int idx = -1;
    for (std::size_t g = 0; g < names.size(); ++g)
      if (names[g].size() > best.size() && text.compare(p, names[g].size(), names[g]) == 0) {
        best = names[g];
        idx = static_cast<int>(g);
      }
    if (idx < 0) fail(errc::parse_error, "unknown generator in word '" + text + "'");
    out.push_back(static_cast<char>(idx));
    p += best.size();
  }
  if (out.empty()) fail(errc::parse_error, "empty word in '" + text + "'");
  return out;
}

inline std::vector<ElementTerm> terms_of(const AlgebraElement& e) {
  std::vector<ElementTerm> out;
  for (const auto& [w, c] : e.terms) out.push_back({c, w});
  return out;
}

inline GradingGroup::Elem elem_from_json(const nlohmann::json& j) {
  GradingGroup::Elem d;
  for (const auto& v : j) d.push_back(v.get<int>());
  return d;
}

}  // namespace detail

inline LoadedPreset load_preset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::unknown_preset, "cannot open preset file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, "bad preset file: " + std::string(e.what()));
  }
  try {
    GradedPresentation raw;
    raw.name = doc.at("name").get<std::string>();
    raw.generators = doc.at("generators").get<std::vector<std::string>>();
    std::vector<int> factors = doc.at("grading").get<std::vector<int>>();
    raw.grading = GradingGroup{factors};
    for (const auto& d : doc.at("degrees")) raw.degrees.push_back(detail::elem_from_json(d));

    // Rule and table values are element expressions; they are parsed against
    // a rule-free copy of the presentation so the written terms are kept
    // literally rather than being rewritten by the rules being defined.
    GradedPresentation skel = raw;
    PresPtr sk = make_presentation(std::move(skel));
    for (const auto& jr : doc.at("rules")) {
      Rule r;
      r.lhs = detail::word_from_text(raw.generators, jr.at("lhs").get<std::string>());
      r.rhs = detail::terms_of(parse_element(sk, jr.at("rhs").get<std::string>()));
      raw.rules.push_back(std::move(r));
    }
    if (doc.contains("star")) {
      std::vector<std::vector<ElementTerm>> table;
      for (const auto& js : doc.at("star"))
        table.push_back(detail::terms_of(parse_element(sk, js.get<std::string>())));
      raw.star_table = std::move(table);
    }
    if (doc.contains("antipode")) {
      std::vector<std::vector<ElementTerm>> table;
      for (const auto& js : doc.at("antipode"))
        table.push_back(detail::terms_of(parse_element(sk, js.get<std::string>())));
      raw.antipode_table = std::move(table);
    }

    LoadedPreset out;
    out.pres = make_presentation(std::move(raw));
    if (doc.contains("modules")) {
      for (const auto& jm : doc.at("modules")) {
        GradingGroup::Elem g = out.pres->grading.reduce(detail::elem_from_json(jm.at("degree")));
        std::vector<AlgebraElement> v, w;
        for (const auto& s : jm.at("v")) v.push_back(parse_element(out.pres, s.get<std::string>()));
        for (const auto& s : jm.at("w")) w.push_back(parse_element(out.pres, s.get<std::string>()));
        std::optional<std::vector<WitnessPair>> cc;
        if (jm.contains("cc")) {
          cc.emplace();
          for (const auto& jp : jm.at("cc"))
            cc->push_back({parse_element(out.pres, jp.at(0).get<std::string>()),
                           parse_element(out.pres, jp.at(1).get<std::string>())});
        }
        out.modules.emplace_back(
            jm.at("name").get<std::string>(),
            make_line_module(out.pres, g, std::move(v), std::move(w), std::move(cc)));
      }
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, "bad preset file: " + std::string(e.what()));
  }
}

}  // namespace nclb
