#pragma once

#include <stdexcept>
#include <vector>

#include "nslice/instance.hpp"
#include "nslice/milp.hpp"
#include "nslice/reachability.hpp"
#include "nslice/solution.hpp"

namespace nslice {

/// Master-problem flavors: the bare placement relaxation, the placement
/// relaxation strengthened with connectivity rows, and additionally with
/// link-capacity rows and their linearization variables.
enum class FpVariant { FP, FP_I, FP_II };

const char* to_string(FpVariant variant);

/// Maps model symbols to variable ids. A missing placement id means the
/// variable does not exist in the model (function not processable there, or
/// fixed to zero by a connectivity argument and removed).
class VariableCatalog {
 public:
  /// x[v,k,s]: -1 when absent. `stage` is 1-based.
  int x_var(int service, int stage, int cloud_slot) const;
  int y_var(int cloud_slot) const { return y_[cloud_slot]; }
  /// r[link, k, flow]: present only in the full model. `flow` is 0..len.
  int r_var(int link, int service, int flow) const;
  /// z/w[v,k,s]: present only with link-capacity rows; -1 when absent.
  int z_var(int service, int stage, int cloud_slot) const;
  int w_var(int service, int stage, int cloud_slot) const;

  bool has_routing() const { return !r_.empty(); }

  /// Hosting nodes recovered from a binary placement vector; throws when some
  /// stage does not have exactly one host at 1.
  Placement extract_placement(const InstanceIndex& idx,
                              const std::vector<double>& x,
                              double tol_int = 1e-6) const;

 private:
  friend class ModelBuilder;
  std::vector<int> x_, z_, w_;  // [k][s-1][slot] flattened
  std::vector<int> y_;
  std::vector<int> r_;  // [k][flow][link] flattened
  std::vector<int> x_offset_, r_offset_;  // per service
  int clouds_ = 0, links_ = 0;
};

/// A placement model plus its catalog.
struct FpModel {
  MixedBinaryProgram program;
  VariableCatalog catalog;
};

/// The full mixed-binary model (placement, activation, routing).
struct NsModel {
  MixedBinaryProgram program;
  VariableCatalog catalog;
};

/// Routing-feasibility system for a fixed placement: link-capacity rows
/// followed by per-(service, flow, node) conservation rows, objective zero.
struct TrModel {
  LinearProgram lp;
  Placement placement;
  std::vector<int> capacity_row_link;  // row -> link id, rows [0, n_cap)
  int flow_rows_begin = 0;
  int nodes = 0, links_total = 0;

  int flow_row(int service, int flow, int node) const;
  int r_var(int link, int service, int flow) const;

 private:
  friend class ModelBuilder;
  std::vector<int> flow_row_offset_;  // per service
  std::vector<int> r_offset_;
};

/// One feedback inequality for the placement master, expressed over abstract
/// placement coordinates so it can be attached to any master variant
/// (coefficients on variables a variant removed are dropped; those variables
/// are zero there).
struct BendersCut {
  struct Term {
    int service;
    int stage;  // 1-based
    int node;   // substrate node index
    double coef;
  };
  std::vector<Term> terms;
  double constant = 0.0;
  int iteration = -1;       // provenance
  int certificate_id = -1;  // provenance

  /// Left-hand side coefficient-sum at a concrete placement, plus constant.
  /// The cut asserts lhs_at(placement) >= 0 for every routable placement.
  double lhs_at(const Placement& placement) const;
};

class CutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full model: minimize activation plus placement power subject to unique
/// hosting, activation coupling, compute capacity, link capacity, and
/// per-flow conservation rows whose right-hand sides carry the placement
/// terms on the left.
NsModel build_ns(const InstanceIndex& idx);

/// Placement master. FP_I removes variables fixed to zero by unreachability
/// of the source or destination and adds the aggregated reachability rows
/// (skipped when the unreachable set is empty). FP_II further adds incoming
/// and outgoing link-capacity rows with their binary linearization
/// variables; capacity rows whose link-capacity sum is unlimited are skipped.
FpModel build_fp(const InstanceIndex& idx, FpVariant variant,
                 const UnreachableSets& reach);

/// Routing feasibility system at a fixed placement. The placement must give
/// every stage exactly one cloud host; anything else is rejected.
TrModel build_tr(const InstanceIndex& idx, const Placement& placement);

/// Appends a cut as a >= row on the master's placement variables. Terms on
/// variables the variant removed are dropped (those variables are zero).
void append_cut(const InstanceIndex& idx, FpModel& model,
                const BendersCut& cut);

/// Turns a verified infeasibility certificate of a routing system into the
/// master inequality it implies. Throws CutError when the certificate fails
/// verification or the produced cut does not cut off the placement that
/// generated it.
BendersCut materialize_cut(const InstanceIndex& idx, const TrModel& tr,
                           const FarkasCertificate& cert,
                           double tol_cert = 1e-6);

/// Affine right-hand side of a conservation row: constant plus signed
/// placement indicators. Shared by the symbolic (full model) and numeric
/// (routing system) builders so the two cannot drift apart.
struct FlowRhs {
  struct Term {
    int stage;  // 1-based
    double coef;
  };
  double constant = 0.0;
  std::vector<Term> terms;  // placement indicators of (service, stage, node)
};
FlowRhs flow_rhs(const InstanceIndex& idx, int service, int flow, int node);

}  // namespace nslice
