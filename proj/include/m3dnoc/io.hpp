// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "m3dnoc/core.hpp"
#include "m3dnoc/eval.hpp"
#include "m3dnoc/search.hpp"

#include <string>

namespace m3dnoc {

/// Shortest exact decimal form (round-trips to the same double).
std::string fmt_double(double v);

/// Design directory layout (all CSV, re-parseable by the loaders below):
///   meta.csv        key,value
///   routers.csv     router_id,x,y,z
///   links.csv       link_id,router_a,router_b,manhattan_len
///   placement.csv   core_id,router_id
///   stage_tiers.csv router_id,vca,swa,xbar
///   link_tiers.csv  link_id,tier
void write_design(const std::string &dir, const Design &d);
Design load_design(const std::string &dir);

/// Topology-only view (generate writes no tier files).
void write_topology(const std::string &dir, const Topology &t, TopologyKind kind);

void write_traffic_csv(const std::string &path, const TrafficMatrix &tm);

/// Single result row: design_id,alpha,beta,gamma,latency_ps,energy_pj,edp
void write_result_csv(const std::string &path, const std::string &design_id,
                      const ProcessParams &pp, const EvalResult &r);

/// iteration,step,best_edp,dataset_rows
void write_history_csv(const std::string &path, const std::vector<HistoryRow> &history);

} // namespace m3dnoc
