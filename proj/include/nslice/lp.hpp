#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace nslice {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LE, EQ, GE };

/// Sparse-row linear program, minimization. Every variable has a finite
/// lower bound; upper bounds may be +inf. Right-hand sides are finite.
class LinearProgram {
 public:
  struct Term {
    int var;
    double coef;
  };
  struct Row {
    RowSense sense = RowSense::LE;
    double rhs = 0.0;
    std::vector<Term> terms;
    std::string name;
  };

  int add_variable(double lower, double upper, double objective = 0.0,
                   std::string name = {});
  /// Duplicate variable ids in `terms` are merged; zero coefficients dropped.
  int add_row(RowSense sense, double rhs, std::vector<Term> terms,
              std::string name = {});

  int num_vars() const { return static_cast<int>(lower_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  double lower(int var) const { return lower_[var]; }
  double upper(int var) const { return upper_[var]; }
  double objective(int var) const { return objective_[var]; }
  const Row& row(int i) const { return rows_[i]; }
  const std::string& var_name(int var) const { return names_[var]; }

  void set_bounds(int var, double lower, double upper);
  void set_objective(int var, double coef) { objective_[var] = coef; }

  /// Throws std::invalid_argument on out-of-range ids, non-finite lower
  /// bounds, inverted bounds, or non-finite right-hand sides.
  void check_well_formed() const;

  double objective_value(const std::vector<double>& x) const;

 private:
  std::vector<double> lower_, upper_, objective_;
  std::vector<std::string> names_;
  std::vector<Row> rows_;
};

/// Row multipliers proving that no point satisfies the rows within the
/// variable bounds. Sign convention: multipliers are >= 0 on LE rows, <= 0 on
/// GE rows, and free on EQ rows, so the weighted sum of rows reads
/// sum_i y_i a_i . x <= y . b for every x satisfying the rows. The
/// certificate is conclusive when even the box minimum of the left side
/// exceeds the right side.
struct FarkasCertificate {
  std::vector<double> row_multipliers;
};

/// Recomputes the aggregation from scratch: sign conditions plus
/// min over the bound box of (A^T y) . x > y . b + tol_cert.
/// Independent of any solver internals. Throws on dimension mismatch.
bool verify_certificate(const LinearProgram& lp, const FarkasCertificate& cert,
                        double tol_cert = 1e-6);

enum class LpStatus { Optimal, Infeasible, Unbounded, Stalled };

struct LpOutcome {
  LpStatus status = LpStatus::Stalled;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> x;           // Optimal
  std::vector<double> duals;       // Optimal: one multiplier per row
  FarkasCertificate certificate;   // Infeasible
  std::vector<double> ray;         // Unbounded: improving feasible direction
  long iterations = 0;
};

const char* to_string(LpStatus status);

/// Writes the model in the industry-standard human-readable LP text format
/// (Minimize / Subject To / Bounds / Binaries / End) for cross-checking
/// against external solvers.
void write_lp_format(std::ostream& out, const LinearProgram& lp,
                     const std::vector<int>* binaries = nullptr,
                     const std::string& name = "model");

}  // namespace nslice
