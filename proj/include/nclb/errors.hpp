#pragma once

#include <stdexcept>
#include <string>

namespace nclb {

enum class errc {
  division_by_zero,
  pole_at_q0,
  parse_error,
  non_terminating,
  no_star_structure,
  not_homogeneous,
  mixed_presentation,
  unknown_generator,
  degenerate_vectors,
  bad_degrees,
  missing_witness,
  verification_failed,
  wrong_module,
  singular_gram,
  not_central,
  not_hermitian,
  not_invertible,
  not_bimodule_map,
  no_solution,
  mixed_module,
  no_metric,
  no_star_on_l,
  no_fourth_root,
  not_star_compatible,
  mixed_dga,
  no_form_star,
  unknown_preset,
  unknown_suite,
  bad_input,
  grid_mismatch,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::division_by_zero: return "DivisionByZero";
    case errc::pole_at_q0: return "PoleAtQ0";
    case errc::parse_error: return "ParseError";
    case errc::non_terminating: return "NonTerminating";
    case errc::no_star_structure: return "NoStarStructure";
    case errc::not_homogeneous: return "NotHomogeneous";
    case errc::mixed_presentation: return "MixedPresentation";
    case errc::unknown_generator: return "UnknownGenerator";
    case errc::degenerate_vectors: return "DegenerateVectors";
    case errc::bad_degrees: return "BadDegrees";
    case errc::missing_witness: return "MissingWitness";
    case errc::verification_failed: return "VerificationFailed";
    case errc::wrong_module: return "WrongModule";
    case errc::singular_gram: return "SingularGram";
    case errc::not_central: return "NotCentral";
    case errc::not_hermitian: return "NotHermitian";
    case errc::not_invertible: return "NotInvertible";
    case errc::not_bimodule_map: return "NotBimoduleMap";
    case errc::no_solution: return "NoSolution";
    case errc::mixed_module: return "MixedModule";
    case errc::no_metric: return "NoMetric";
    case errc::no_star_on_l: return "NoStarOnL";
    case errc::no_fourth_root: return "NoFourthRoot";
    case errc::not_star_compatible: return "NotStarCompatible";
    case errc::mixed_dga: return "MixedDGA";
    case errc::no_form_star: return "NoFormStar";
    case errc::unknown_preset: return "UnknownPreset";
    case errc::unknown_suite: return "UnknownSuite";
    case errc::bad_input: return "BadInput";
    case errc::grid_mismatch: return "GridMismatch";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& detail = "") {
  throw error(code, detail);
}

}  // namespace nclb
