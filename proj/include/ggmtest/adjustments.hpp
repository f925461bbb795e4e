#pragma once

#include "ggmtest/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ggm {

enum class ProcedureKind {
  Simultaneous,
  Bonferroni,
  Sidak,
  HolmBonferroni,
  HolmSidak,
};

inline constexpr std::array<ProcedureKind, 5> kAllProcedures = {
    ProcedureKind::Simultaneous, ProcedureKind::Bonferroni, ProcedureKind::Sidak,
    ProcedureKind::HolmBonferroni, ProcedureKind::HolmSidak};

/// CLI and config names: simultaneous, bonferroni, sidak, holm-bonferroni, holm-sidak.
std::string_view to_string(ProcedureKind kind) noexcept;
std::optional<ProcedureKind> parse_procedure(std::string_view name) noexcept;

struct AdjustedPValues {
  ProcedureKind procedure = ProcedureKind::Simultaneous;
  EdgePValues values;
};

// Adjustments over a plain family of m p-values; the family size m is the
// length of the input.
std::vector<double> adjust_bonferroni(std::span<const double> raw);
std::vector<double> adjust_sidak(std::span<const double> raw);
std::vector<double> adjust_holm_bonferroni(std::span<const double> raw);
std::vector<double> adjust_holm_sidak(std::span<const double> raw);
std::vector<double> adjust(ProcedureKind kind, std::span<const double> raw);

AdjustedPValues adjust_identity(const EdgePValues& raw);
AdjustedPValues adjust_bonferroni(const EdgePValues& raw);
AdjustedPValues adjust_sidak(const EdgePValues& raw);
AdjustedPValues adjust_holm_bonferroni(const EdgePValues& raw);
AdjustedPValues adjust_holm_sidak(const EdgePValues& raw);
AdjustedPValues adjust(ProcedureKind kind, const EdgePValues& raw);

/// Edges whose adjusted p-value is strictly below alpha, alpha in (0, 1).
EdgeSet decide(const AdjustedPValues& adj, double alpha);

/// Same rule without the range check on the threshold; used for threshold
/// sweeps that include 0 and 1.
EdgeSet decide_below(const EdgePValues& values, double threshold);

}  // namespace ggm
