#include "nslice/lp.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace nslice {

int LinearProgram::add_variable(double lower, double upper, double objective,
                                std::string name) {
  const int id = num_vars();
  lower_.push_back(lower);
  upper_.push_back(upper);
  objective_.push_back(objective);
  if (name.empty()) name = "x" + std::to_string(id);
  names_.push_back(std::move(name));
  return id;
}

int LinearProgram::add_row(RowSense sense, double rhs, std::vector<Term> terms,
                           std::string name) {
  std::map<int, double> merged;
  for (const Term& t : terms) merged[t.var] += t.coef;
  Row row;
  row.sense = sense;
  row.rhs = rhs;
  for (const auto& [var, coef] : merged)
    if (coef != 0.0) row.terms.push_back({var, coef});
  if (name.empty()) name = "c" + std::to_string(num_rows());
  row.name = std::move(name);
  rows_.push_back(std::move(row));
  return num_rows() - 1;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  lower_[var] = lower;
  upper_[var] = upper;
}

void LinearProgram::check_well_formed() const {
  for (int j = 0; j < num_vars(); ++j) {
    if (!std::isfinite(lower_[j]))
      throw std::invalid_argument("variable " + names_[j] +
                                  ": lower bound must be finite");
    if (std::isnan(upper_[j]) || upper_[j] < lower_[j])
      throw std::invalid_argument("variable " + names_[j] + ": bad bounds");
    if (!std::isfinite(objective_[j]))
      throw std::invalid_argument("variable " + names_[j] +
                                  ": objective must be finite");
  }
  for (const Row& row : rows_) {
    if (!std::isfinite(row.rhs))
      throw std::invalid_argument("row " + row.name +
                                  ": right-hand side must be finite");
    for (const Term& t : row.terms) {
      if (t.var < 0 || t.var >= num_vars())
        throw std::invalid_argument("row " + row.name +
                                    ": unknown variable id");
      if (!std::isfinite(t.coef))
        throw std::invalid_argument("row " + row.name +
                                    ": coefficient must be finite");
    }
  }
}

double LinearProgram::objective_value(const std::vector<double>& x) const {
  double obj = 0.0;
  for (int j = 0; j < num_vars(); ++j) obj += objective_[j] * x[j];
  return obj;
}

bool verify_certificate(const LinearProgram& lp, const FarkasCertificate& cert,
                        double tol_cert) {
  if (static_cast<int>(cert.row_multipliers.size()) != lp.num_rows())
    throw std::invalid_argument("certificate dimension mismatch");

  double rhs_sum = 0.0;
  std::vector<double> aggregated(lp.num_vars(), 0.0);
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double y = cert.row_multipliers[i];
    const LinearProgram::Row& row = lp.row(i);
    if (row.sense == RowSense::LE && y < 0.0) return false;
    if (row.sense == RowSense::GE && y > 0.0) return false;
    if (y == 0.0) continue;
    rhs_sum += y * row.rhs;
    for (const auto& t : row.terms) aggregated[t.var] += y * t.coef;
  }

  // Minimum of (A^T y) . x over the bound box. Coefficients below noise level
  // are treated as zero so an unlimited upper bound is not spuriously fatal.
  double box_min = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    double w = aggregated[j];
    if (std::abs(w) < 1e-9) continue;
    if (w > 0.0) {
      box_min += w * lp.lower(j);
    } else {
      if (lp.upper(j) == kInf) return false;
      box_min += w * lp.upper(j);
    }
  }
  return box_min - rhs_sum > tol_cert;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
    case LpStatus::Stalled:
      return "stalled";
  }
  return "unknown";
}

namespace {

void write_terms(std::ostream& out, const LinearProgram& lp,
                 const std::vector<LinearProgram::Term>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    const double c = t.coef;
    if (first) {
      if (c < 0) out << "- ";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    const double mag = std::abs(c);
    if (mag != 1.0) out << mag << " ";
    out << lp.var_name(t.var);
  }
  if (first) out << "0 " << lp.var_name(0);
}

}  // namespace

void write_lp_format(std::ostream& out, const LinearProgram& lp,
                     const std::vector<int>* binaries,
                     const std::string& name) {
  out << "\\ " << name << "\n";
  out << "Minimize\n obj:";
  std::vector<LinearProgram::Term> obj;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.objective(j) != 0.0) obj.push_back({j, lp.objective(j)});
  out << " ";
  write_terms(out, lp, obj);
  out << "\nSubject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& row = lp.row(i);
    out << " " << row.name << ": ";
    write_terms(out, lp, row.terms);
    switch (row.sense) {
      case RowSense::LE:
        out << " <= ";
        break;
      case RowSense::EQ:
        out << " = ";
        break;
      case RowSense::GE:
        out << " >= ";
        break;
    }
    out << row.rhs << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    out << " " << lp.lower(j) << " <= " << lp.var_name(j);
    if (lp.upper(j) != kInf) out << " <= " << lp.upper(j);
    out << "\n";
  }
  if (binaries && !binaries->empty()) {
    out << "Binaries\n";
    for (int j : *binaries) out << " " << lp.var_name(j) << "\n";
  }
  out << "End\n";
}

}  // namespace nslice
