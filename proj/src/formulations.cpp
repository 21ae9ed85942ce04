#include "nslice/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace nslice {

const char* to_string(FpVariant variant) {
  switch (variant) {
    case FpVariant::FP:
      return "fp";
    case FpVariant::FP_I:
      return "fp1";
    case FpVariant::FP_II:
      return "fp2";
  }
  return "unknown";
}

int VariableCatalog::x_var(int service, int stage, int cloud_slot) const {
  return x_[x_offset_[service] + (stage - 1) * clouds_ + cloud_slot];
}

int VariableCatalog::z_var(int service, int stage, int cloud_slot) const {
  if (z_.empty()) return -1;
  return z_[x_offset_[service] + (stage - 1) * clouds_ + cloud_slot];
}

int VariableCatalog::w_var(int service, int stage, int cloud_slot) const {
  if (w_.empty()) return -1;
  return w_[x_offset_[service] + (stage - 1) * clouds_ + cloud_slot];
}

int VariableCatalog::r_var(int link, int service, int flow) const {
  return r_[r_offset_[service] + flow * links_ + link];
}

Placement VariableCatalog::extract_placement(const InstanceIndex& idx,
                                             const std::vector<double>& x,
                                             double tol_int) const {
  Placement placement(idx.service_count());
  for (int k = 0; k < idx.service_count(); ++k) {
    for (int s = 1; s <= idx.chain_length(k); ++s) {
      int host = -1;
      for (int c = 0; c < idx.cloud_count(); ++c) {
        const int var = x_var(k, s, c);
        if (var < 0) continue;
        if (x[var] > 1.0 - tol_int) {
          if (host >= 0)
            throw std::runtime_error("placement has two hosts for one stage");
          host = idx.clouds()[c].node;
        }
      }
      if (host < 0)
        throw std::runtime_error("placement leaves a stage unhosted");
      placement[k].push_back(host);
    }
  }
  return placement;
}

int TrModel::flow_row(int service, int flow, int node) const {
  return flow_rows_begin + flow_row_offset_[service] + flow * nodes + node;
}

int TrModel::r_var(int link, int service, int flow) const {
  return r_offset_[service] + flow * links_total + link;
}

double BendersCut::lhs_at(const Placement& placement) const {
  double lhs = constant;
  for (const Term& t : terms)
    if (placement[t.service][t.stage - 1] == t.node) lhs += t.coef;
  return lhs;
}

FlowRhs flow_rhs(const InstanceIndex& idx, int service, int flow, int node) {
  FlowRhs rhs;
  const auto& svc = idx.services()[service];
  const int len = idx.chain_length(service);
  if (flow == 0 && node == svc.source) rhs.constant -= 1.0;
  if (flow == len && node == svc.destination) rhs.constant += 1.0;
  if (idx.cloud_slot(node) >= 0) {
    if (flow < len) rhs.terms.push_back({flow + 1, 1.0});
    if (flow >= 1) rhs.terms.push_back({flow, -1.0});
  }
  return rhs;
}

class ModelBuilder {
 public:
  // Placement and activation variables plus the shared placement rows
  // (unique hosting, activation coupling, compute capacity). `removed_x`
  // marks (service, stage, slot) combinations fixed to zero and left out.
  static void add_placement_core(const InstanceIndex& idx,
                                 MixedBinaryProgram& p, VariableCatalog& cat,
                                 const std::vector<char>* removed_x) {
    const int clouds = idx.cloud_count();
    cat.clouds_ = clouds;
    cat.x_offset_.resize(idx.service_count());
    int total = 0;
    for (int k = 0; k < idx.service_count(); ++k) {
      cat.x_offset_[k] = total;
      total += idx.chain_length(k) * clouds;
    }
    cat.x_.assign(total, -1);

    for (int k = 0; k < idx.service_count(); ++k) {
      const auto& svc = idx.services()[k];
      for (int s = 1; s <= idx.chain_length(k); ++s) {
        for (const auto& [slot, cost] : svc.stages[s - 1].costs) {
          const int flat = cat.x_offset_[k] + (s - 1) * clouds + slot;
          if (removed_x && (*removed_x)[flat]) continue;
          std::ostringstream name;
          name << "x_" << k << "_" << s << "_"
               << idx.node_name(idx.clouds()[slot].node);
          const int var = p.lp.add_variable(0.0, 1.0, cost, name.str());
          cat.x_[flat] = var;
          p.binaries.push_back(var);
        }
      }
    }

    cat.y_.resize(clouds);
    for (int c = 0; c < clouds; ++c) {
      const int var =
          p.lp.add_variable(0.0, 1.0, idx.clouds()[c].activation_power,
                            "y_" + idx.node_name(idx.clouds()[c].node));
      cat.y_[c] = var;
      p.binaries.push_back(var);
    }

    for (int k = 0; k < idx.service_count(); ++k) {
      for (int s = 1; s <= idx.chain_length(k); ++s) {
        std::vector<LinearProgram::Term> host;
        for (int c = 0; c < clouds; ++c) {
          const int var = cat.x_var(k, s, c);
          if (var < 0) continue;
          host.push_back({var, 1.0});
          std::ostringstream name;
          name << "act_" << k << "_" << s << "_"
               << idx.node_name(idx.clouds()[c].node);
          p.lp.add_row(RowSense::LE, 0.0,
                       {{var, 1.0}, {cat.y_var(c), -1.0}}, name.str());
        }
        std::ostringstream name;
        name << "host_" << k << "_" << s;
        p.lp.add_row(RowSense::EQ, 1.0, std::move(host), name.str());
      }
    }

    for (int c = 0; c < clouds; ++c) {
      if (idx.clouds()[c].compute_capacity.is_unlimited()) continue;
      std::vector<LinearProgram::Term> load;
      for (int k = 0; k < idx.service_count(); ++k)
        for (int s = 1; s <= idx.chain_length(k); ++s) {
          const int var = cat.x_var(k, s, c);
          if (var >= 0) load.push_back({var, idx.flow_rate(k, s)});
        }
      load.push_back({cat.y_var(c), -idx.clouds()[c].compute_capacity.value()});
      p.lp.add_row(RowSense::LE, 0.0, std::move(load),
                   "mu_" + idx.node_name(idx.clouds()[c].node));
    }
  }

  static void add_connectivity(const InstanceIndex& idx, FpModel& model,
                               const UnreachableSets& reach) {
    auto& p = model.program;
    auto& cat = model.catalog;
    for (int c0 = 0; c0 < idx.cloud_count(); ++c0) {
      const auto& unreachable = reach.from_cloud[c0];
      if (unreachable.empty()) continue;  // both sides always sum to one
      std::set<int> excluded(unreachable.begin(), unreachable.end());
      for (int k = 0; k < idx.service_count(); ++k) {
        for (int s = 1; s < idx.chain_length(k); ++s) {
          std::vector<LinearProgram::Term> terms;
          for (int c = 0; c < idx.cloud_count(); ++c) {
            if (excluded.count(idx.clouds()[c].node)) continue;
            const int cur = cat.x_var(k, s, c);
            const int nxt = cat.x_var(k, s + 1, c);
            if (cur >= 0) terms.push_back({cur, 1.0});
            if (nxt >= 0) terms.push_back({nxt, -1.0});
          }
          if (terms.empty()) continue;
          std::ostringstream name;
          name << "conn_" << idx.node_name(idx.clouds()[c0].node) << "_" << k
               << "_" << s;
          p.lp.add_row(RowSense::LE, 0.0, std::move(terms), name.str());
        }
      }
    }
  }

  static void add_link_capacity(const InstanceIndex& idx, FpModel& model) {
    auto& p = model.program;
    auto& cat = model.catalog;
    cat.z_.assign(cat.x_.size(), -1);
    cat.w_.assign(cat.x_.size(), -1);

    for (int c = 0; c < idx.cloud_count(); ++c) {
      const int node = idx.clouds()[c].node;

      // Total capacity of incoming / outgoing links; unlimited => row skipped.
      auto side_bound = [&](std::span<const int> links) {
        double bound = 0.0;
        for (int l : links) {
          if (idx.links()[l].capacity.is_unlimited())
            return std::pair{true, 0.0};
          bound += idx.links()[l].capacity.value();
        }
        return std::pair{false, bound};
      };
      const auto [in_unlimited, in_bound] = side_bound(idx.in_links(node));
      const auto [out_unlimited, out_bound] = side_bound(idx.out_links(node));

      if (!in_unlimited) {
        std::vector<LinearProgram::Term> terms;
        for (int k = 0; k < idx.service_count(); ++k) {
          const int first = cat.x_var(k, 1, c);
          if (first >= 0) terms.push_back({first, idx.flow_rate(k, 0)});
          for (int s = 1; s < idx.chain_length(k); ++s) {
            const int nxt = cat.x_var(k, s + 1, c);
            if (nxt < 0) continue;  // (x^{s+1}-x^s)^+ is identically zero
            const int flat = cat.x_offset_[k] + (s - 1) * cat.clouds_ + c;
            if (cat.z_[flat] < 0) {
              std::ostringstream name;
              name << "z_" << k << "_" << s << "_" << idx.node_name(node);
              const int z = p.lp.add_variable(0.0, 1.0, 0.0, name.str());
              cat.z_[flat] = z;
              p.binaries.push_back(z);
              std::vector<LinearProgram::Term> lin{{nxt, 1.0}, {z, -1.0}};
              const int cur = cat.x_var(k, s, c);
              if (cur >= 0) lin.push_back({cur, -1.0});
              p.lp.add_row(RowSense::LE, 0.0, std::move(lin),
                           "zlin_" + name.str());
            }
            terms.push_back({cat.z_[flat], idx.flow_rate(k, s)});
          }
        }
        if (!terms.empty()) {
          terms.push_back({cat.y_var(c), -in_bound});
          p.lp.add_row(RowSense::LE, 0.0, std::move(terms),
                       "capin_" + idx.node_name(node));
        }
      }

      if (!out_unlimited) {
        std::vector<LinearProgram::Term> terms;
        for (int k = 0; k < idx.service_count(); ++k) {
          const int len = idx.chain_length(k);
          const int last = cat.x_var(k, len, c);
          if (last >= 0) terms.push_back({last, idx.flow_rate(k, len)});
          for (int s = 1; s < len; ++s) {
            const int cur = cat.x_var(k, s, c);
            if (cur < 0) continue;  // (x^s-x^{s+1})^+ is identically zero
            const int flat = cat.x_offset_[k] + (s - 1) * cat.clouds_ + c;
            if (cat.w_[flat] < 0) {
              std::ostringstream name;
              name << "w_" << k << "_" << s << "_" << idx.node_name(node);
              const int w = p.lp.add_variable(0.0, 1.0, 0.0, name.str());
              cat.w_[flat] = w;
              p.binaries.push_back(w);
              std::vector<LinearProgram::Term> lin{{cur, 1.0}, {w, -1.0}};
              const int nxt = cat.x_var(k, s + 1, c);
              if (nxt >= 0) lin.push_back({nxt, -1.0});
              p.lp.add_row(RowSense::LE, 0.0, std::move(lin),
                           "wlin_" + name.str());
            }
            terms.push_back({cat.w_[flat], idx.flow_rate(k, s)});
          }
        }
        if (!terms.empty()) {
          terms.push_back({cat.y_var(c), -out_bound});
          p.lp.add_row(RowSense::LE, 0.0, std::move(terms),
                       "capout_" + idx.node_name(node));
        }
      }
    }
  }

  static void add_routing(const InstanceIndex& idx, NsModel& model) {
    auto& p = model.program;
    auto& cat = model.catalog;
    const int links = idx.link_count();
    cat.links_ = links;
    cat.r_offset_.resize(idx.service_count());
    int total = 0;
    for (int k = 0; k < idx.service_count(); ++k) {
      cat.r_offset_[k] = total;
      total += (idx.chain_length(k) + 1) * links;
    }
    cat.r_.assign(total, -1);
    for (int k = 0; k < idx.service_count(); ++k)
      for (int f = 0; f <= idx.chain_length(k); ++f)
        for (int l = 0; l < links; ++l) {
          std::ostringstream name;
          name << "r_" << k << "_" << f << "_" << l;
          cat.r_[cat.r_offset_[k] + f * links + l] =
              p.lp.add_variable(0.0, kInf, 0.0, name.str());
        }

    for (int l = 0; l < links; ++l) {
      if (idx.links()[l].capacity.is_unlimited()) continue;
      std::vector<LinearProgram::Term> terms;
      for (int k = 0; k < idx.service_count(); ++k)
        for (int f = 0; f <= idx.chain_length(k); ++f)
          terms.push_back({cat.r_var(l, k, f), idx.flow_rate(k, f)});
      p.lp.add_row(RowSense::LE, idx.links()[l].capacity.value(),
                   std::move(terms), "cap_" + std::to_string(l));
    }

    for (int k = 0; k < idx.service_count(); ++k) {
      for (int f = 0; f <= idx.chain_length(k); ++f) {
        for (int i = 0; i < idx.node_count(); ++i) {
          std::vector<LinearProgram::Term> terms;
          for (int l : idx.in_links(i)) terms.push_back({cat.r_var(l, k, f), 1.0});
          for (int l : idx.out_links(i))
            terms.push_back({cat.r_var(l, k, f), -1.0});
          const FlowRhs rhs = flow_rhs(idx, k, f, i);
          for (const auto& t : rhs.terms) {
            const int var = cat.x_var(k, t.stage, idx.cloud_slot(i));
            if (var >= 0) terms.push_back({var, -t.coef});
          }
          std::ostringstream name;
          name << "flow_" << k << "_" << f << "_" << idx.node_name(i);
          p.lp.add_row(RowSense::EQ, rhs.constant, std::move(terms),
                       name.str());
        }
      }
    }
  }

  static TrModel build_tr_impl(const InstanceIndex& idx,
                               const Placement& placement) {
    if (static_cast<int>(placement.size()) != idx.service_count())
      throw std::invalid_argument("placement does not cover every service");
    for (int k = 0; k < idx.service_count(); ++k) {
      if (static_cast<int>(placement[k].size()) != idx.chain_length(k))
        throw std::invalid_argument("placement does not cover every stage");
      for (int node : placement[k])
        if (node < 0 || node >= idx.node_count() || idx.cloud_slot(node) < 0)
          throw std::invalid_argument("placement host is not a cloud node");
    }

    TrModel tr;
    tr.placement = placement;
    tr.nodes = idx.node_count();
    tr.links_total = idx.link_count();
    tr.r_offset_.resize(idx.service_count());
    int total = 0;
    for (int k = 0; k < idx.service_count(); ++k) {
      tr.r_offset_[k] = total;
      total += (idx.chain_length(k) + 1) * idx.link_count();
    }
    for (int k = 0; k < idx.service_count(); ++k)
      for (int f = 0; f <= idx.chain_length(k); ++f)
        for (int l = 0; l < idx.link_count(); ++l) {
          std::ostringstream name;
          name << "r_" << k << "_" << f << "_" << l;
          tr.lp.add_variable(0.0, kInf, 0.0, name.str());
        }

    for (int l = 0; l < idx.link_count(); ++l) {
      if (idx.links()[l].capacity.is_unlimited()) continue;
      std::vector<LinearProgram::Term> terms;
      for (int k = 0; k < idx.service_count(); ++k)
        for (int f = 0; f <= idx.chain_length(k); ++f)
          terms.push_back({tr.r_var(l, k, f), idx.flow_rate(k, f)});
      tr.capacity_row_link.push_back(l);
      tr.lp.add_row(RowSense::LE, idx.links()[l].capacity.value(),
                    std::move(terms), "cap_" + std::to_string(l));
    }
    tr.flow_rows_begin = static_cast<int>(tr.capacity_row_link.size());

    tr.flow_row_offset_.resize(idx.service_count());
    int flow_rows = 0;
    for (int k = 0; k < idx.service_count(); ++k) {
      tr.flow_row_offset_[k] = flow_rows;
      flow_rows += (idx.chain_length(k) + 1) * idx.node_count();
    }

    for (int k = 0; k < idx.service_count(); ++k) {
      for (int f = 0; f <= idx.chain_length(k); ++f) {
        for (int i = 0; i < idx.node_count(); ++i) {
          std::vector<LinearProgram::Term> terms;
          for (int l : idx.in_links(i))
            terms.push_back({tr.r_var(l, k, f), 1.0});
          for (int l : idx.out_links(i))
            terms.push_back({tr.r_var(l, k, f), -1.0});
          const FlowRhs rhs = flow_rhs(idx, k, f, i);
          double b = rhs.constant;
          for (const auto& t : rhs.terms)
            if (placement[k][t.stage - 1] == i) b += t.coef;
          std::ostringstream name;
          name << "flow_" << k << "_" << f << "_" << idx.node_name(i);
          tr.lp.add_row(RowSense::EQ, b, std::move(terms), name.str());
        }
      }
    }
    return tr;
  }
};

NsModel build_ns(const InstanceIndex& idx) {
  NsModel model;
  ModelBuilder::add_placement_core(idx, model.program, model.catalog, nullptr);
  ModelBuilder::add_routing(idx, model);
  return model;
}

FpModel build_fp(const InstanceIndex& idx, FpVariant variant,
                 const UnreachableSets& reach) {
  FpModel model;
  std::vector<char>* removed_ptr = nullptr;
  std::vector<char> removed;
  if (variant != FpVariant::FP) {
    // Variables fixed to zero by source/destination unreachability are
    // removed from the model rather than constrained.
    int total = 0;
    for (int k = 0; k < idx.service_count(); ++k)
      total += idx.chain_length(k) * idx.cloud_count();
    removed.assign(total, 0);
    int offset = 0;
    for (int k = 0; k < idx.service_count(); ++k) {
      std::set<int> dead(reach.from_source[k].begin(),
                         reach.from_source[k].end());
      dead.insert(reach.to_destination[k].begin(),
                  reach.to_destination[k].end());
      for (int s = 1; s <= idx.chain_length(k); ++s)
        for (int c = 0; c < idx.cloud_count(); ++c)
          if (dead.count(idx.clouds()[c].node))
            removed[offset + (s - 1) * idx.cloud_count() + c] = 1;
      offset += idx.chain_length(k) * idx.cloud_count();
    }
    removed_ptr = &removed;
  }
  ModelBuilder::add_placement_core(idx, model.program, model.catalog,
                                   removed_ptr);
  if (variant != FpVariant::FP) ModelBuilder::add_connectivity(idx, model, reach);
  if (variant == FpVariant::FP_II) ModelBuilder::add_link_capacity(idx, model);
  return model;
}

TrModel build_tr(const InstanceIndex& idx, const Placement& placement) {
  return ModelBuilder::build_tr_impl(idx, placement);
}

void append_cut(const InstanceIndex& idx, FpModel& model,
                const BendersCut& cut) {
  std::vector<LinearProgram::Term> terms;
  for (const auto& t : cut.terms) {
    const int var =
        model.catalog.x_var(t.service, t.stage, idx.cloud_slot(t.node));
    if (var >= 0) terms.push_back({var, t.coef});
  }
  std::ostringstream name;
  name << "cut_" << cut.iteration << "_" << cut.certificate_id;
  model.program.lp.add_row(RowSense::GE, -cut.constant, std::move(terms),
                           name.str());
}

BendersCut materialize_cut(const InstanceIndex& idx, const TrModel& tr,
                           const FarkasCertificate& cert, double tol_cert) {
  if (!verify_certificate(tr.lp, cert, tol_cert))
    throw CutError("certificate failed verification; refusing to emit a cut");

  BendersCut cut;
  const auto& y = cert.row_multipliers;
  for (size_t row = 0; row < tr.capacity_row_link.size(); ++row) {
    const int link = tr.capacity_row_link[row];
    cut.constant += idx.links()[link].capacity.value() * y[row];
  }
  for (int k = 0; k < idx.service_count(); ++k) {
    const int len = idx.chain_length(k);
    cut.constant -= y[tr.flow_row(k, 0, idx.services()[k].source)];
    cut.constant += y[tr.flow_row(k, len, idx.services()[k].destination)];
    for (int s = 1; s <= len; ++s) {
      for (const auto& cloud : idx.clouds()) {
        const double coef = y[tr.flow_row(k, s - 1, cloud.node)] -
                            y[tr.flow_row(k, s, cloud.node)];
        if (coef != 0.0) cut.terms.push_back({k, s, cloud.node, coef});
      }
    }
  }

  const double violation = cut.lhs_at(tr.placement);
  if (violation >= -tol_cert) {
    std::ostringstream msg;
    msg << "materialized cut does not cut off its placement (lhs = "
        << violation << ")";
    throw CutError(msg.str());
  }
  return cut;
}

}  // namespace nslice
