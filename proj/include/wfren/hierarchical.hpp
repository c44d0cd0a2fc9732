#pragma once

#include <array>
#include <string>
#include <vector>

#include "wfren/renorm.hpp"
#include "wfren/rng.hpp"

namespace wfren::hier {

// State of the truncated hierarchical lattice: N^K sites, each a pair in
// [0,1]^2. The site id encodes the digits of the hierarchical index in base
// N, least significant digit first; the level-k block around a site is the
// set of ids sharing id / N^k.
struct LatticeState {
    int N = 2;
    int K = 4;
    std::vector<std::array<double, 2>> site;

    long long n_sites() const { return static_cast<long long>(site.size()); }
};

struct HierConfig {
    double dt = 1e-3;
    double record_interval = 0.1;  // trajectory sampling interval
    bool noise_off = false;        // migration-only dynamics, for conservation checks
};

struct Trajectory {
    std::vector<double> times;
    std::vector<LatticeState> states;
};

// Euler steps of the hierarchically interacting catalytic system with
// migration constants c_0..c_{K-1} (free boundary above level K), local
// diffusion matrix w and constant initial condition theta.
Trajectory simulate_hierarchical(int N, int K, const renorm::CatalyticDiffusionMatrix& w,
                                 const std::vector<double>& c, std::array<double, 2> theta,
                                 double horizon, const HierConfig& cfg, Rng& rng);

// Arithmetic mean over the N^k sites at hierarchical distance <= k from site
// xi (k = 0 gives the site itself).
std::array<double, 2> block_average(const LatticeState& state, long long xi, int k);

// Nested block averages around the origin, outermost (level n) first.
std::vector<std::array<double, 2>> interaction_chain_extract(const LatticeState& state, int n);

enum class Recurrence { recurrent, transient, undetermined };

struct RecurrenceReport {
    Recurrence classification = Recurrence::undetermined;
    bool used_closed_form = false;
    std::vector<double> d;             // d_k = sum_n c_{k+n} / N^n
    std::vector<double> partial_sums;  // partial sums of 1/d_k
    std::string note;
};

// Classification of the hierarchical random walk via divergence of
// sum 1/d_k. A geometric tag c_k = r^k uses the closed form (recurrent iff
// r <= 1); otherwise numeric heuristics with reported partial sums.
RecurrenceReport recurrence_test(const std::vector<double>& c, int N);
RecurrenceReport recurrence_test_geometric(double r, int N);

std::string to_string(Recurrence r);

}  // namespace wfren::hier
