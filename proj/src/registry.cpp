#include "wfren/registry.hpp"

namespace wfren {

const std::vector<SubcommandInfo>& cli_registry() {
    static const std::vector<SubcommandInfo> table = {
        {"invariant-law",
         {"simulate_wf_path", "sample_invariant", "invariant_moment", "couple_wf_pair",
          "dual_chain_psi_infinity"}},
        {"loglaplace",
         {"sample_cluster", "apply_U", "apply_U_dual_hm", "chi_m", "large_gamma_bound",
          "check_shape_preservation"}},
        {"renorm-iterate",
         {"schedule_from_ck", "rescaled_F", "F_c", "iterate_U", "iterate_renorm",
          "effective_boundary", "iterated_kernel_sample", "verify_fixed_point"}},
        {"pde-flow", {"run_flow_2d", "run_cauchy_1d"}},
        {"solve-pstar", {"solve_p_star", "run_cauchy_1d"}},
        {"branching",
         {"step_poisson_cluster", "run_renorm_branching", "poissonize", "run_embedded_h11",
          "run_embedded_h00", "run_embedded_h01", "weighted_mass_statistics"}},
        {"campbell", {"immortal_chain_step", "simulate_campbell_tree"}},
        {"hierarchical",
         {"simulate_hierarchical", "block_average", "recurrence_test",
          "interaction_chain_extract"}},
        {"verify",
         {"main", "sample_invariant", "invariant_moment", "apply_U", "apply_U_dual_hm",
          "dual_chain_psi_infinity", "iterate_U", "run_flow_2d", "run_cauchy_1d", "solve_p_star",
          "estimate_nu_moments", "F_c", "couple_wf_pair", "run_embedded_h00",
          "weighted_mass_statistics", "immortal_chain_step", "sample_cluster", "recurrence_test",
          "simulate_hierarchical"}},
    };
    return table;
}

const std::vector<std::string>& all_operations() {
    static const std::vector<std::string> ops = {
        // wf_core
        "simulate_wf_path", "sample_invariant", "invariant_moment", "couple_wf_pair",
        "dual_chain_psi_infinity",
        // loglaplace
        "sample_cluster", "apply_U", "apply_U_dual_hm", "iterate_U", "chi_m", "large_gamma_bound",
        "check_shape_preservation",
        // renorm
        "schedule_from_ck", "rescaled_F", "F_c", "iterate_renorm", "estimate_nu_moments",
        "effective_boundary", "iterated_kernel_sample",
        // pde_flow
        "run_flow_2d", "run_cauchy_1d", "solve_p_star", "verify_fixed_point",
        // branching
        "step_poisson_cluster", "run_renorm_branching", "poissonize", "run_embedded_h11",
        "run_embedded_h00", "run_embedded_h01", "weighted_mass_statistics", "immortal_chain_step",
        "simulate_campbell_tree",
        // hierarchical
        "simulate_hierarchical", "block_average", "recurrence_test", "interaction_chain_extract",
        // cli
        "main",
    };
    return ops;
}

}  // namespace wfren
