#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "splitkit/rational.hpp"

namespace splitkit {

struct SchemeTags {
  bool nonnegative = false;
  bool symmetric = false;
  bool parameterized = false;
};

// Splitting coefficient table a[l][nu]: operator l = 1..n_ops (first index),
// stage nu = 1..stages (second index). Application order within a step is
// stage-major: stage 1 first, operators ascending inside each stage, so the
// first subflow applied is (l=1, nu=1).
struct SchemeTable {
  std::string name;
  int n_ops = 0;
  int stages = 0;
  int order = 0;
  std::vector<std::vector<Rational>> coeffs;
  SchemeTags tags;
};

// Two same-order schemes whose leading local error terms are proportional
// with ratio gamma != 1.
struct MilnePair {
  SchemeTable basic;
  SchemeTable partner;
  Rational gamma;
};

using RegistryEntry = std::variant<SchemeTable, MilnePair>;

// Dimension and consistency checks; throws ValidationError naming the
// offending operator row and its sum when sum_nu a[l][nu] != 1 within 5e-7.
void validate(const SchemeTable& s);

// The applied factors (operator, coefficient) in application order with zero
// coefficients stripped.
std::vector<std::pair<int, Rational>> factor_sequence(const SchemeTable& s);

// True when factor_sequence reads the same forwards and backwards.
bool is_palindromic(const SchemeTable& s);

// The one-parameter 4-operator family; second order for every t,
// nonnegative exactly when 0 <= t <= 1/2.
SchemeTable table1_parameterized(const Rational& t);

std::vector<std::string> registry_names();
RegistryEntry registry_get(const std::string& name);

// Convenience: registry_get that must yield a plain scheme.
SchemeTable registry_scheme(const std::string& name);

// Directory for optional external coefficient files (env SPLITKIT_DATA_DIR).
std::optional<std::filesystem::path> data_dir();

SchemeTable load_scheme(const std::filesystem::path& path);
void save_scheme(const SchemeTable& s, const std::filesystem::path& path,
                 const std::vector<std::string>& comments = {});

MilnePair load_pair(const std::filesystem::path& path);
void save_pair(const MilnePair& pair, const std::filesystem::path& path,
               const std::vector<std::string>& comments = {});

}  // namespace splitkit
