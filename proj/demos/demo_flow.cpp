// Perturb a degree-one winding map, relax it with the projected gradient
// flow, and watch the energy settle back onto the quantised value 2*pi.
//
//   ./demo_flow [n] [amplitude]

#include <cstdio>
#include <cstdlib>

#include "speclab/speclab.hpp"

using namespace speclab;

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 256;
    const double amplitude = argc > 2 ? std::atof(argv[2]) : 0.1;

    Grid1D g = Grid1D::make(n, 2.0 * std::numbers::pi);
    Field u0 = perturbed_winding(g, 1, 3, amplitude, 8);
    std::printf("initial energy  %.12f\n", energy(u0));
    std::printf("initial defect  %.3e\n\n", lp_norm(el_residual(u0), 2.0));

    FlowConfig cfg;
    cfg.max_steps = 10000;
    FlowTrace tr = run_flow(u0, cfg);

    std::printf("%8s  %18s  %12s\n", "step", "energy", "defect");
    const std::size_t total = tr.steps.size();
    for (std::size_t i = 0; i < total; ++i) {
        if (i % 200 != 0 && i + 1 != total) continue;
        std::printf("%8zu  %18.12f  %12.3e\n", i, tr.steps[i].energy, tr.steps[i].el_norm);
    }

    std::printf("\nstopped: %s after %zu steps\n", tr.stop_reason.c_str(), total - 1);
    std::printf("final energy    %.12f   (2*pi = %.12f)\n", tr.final_energy,
                2.0 * std::numbers::pi);
    std::printf("final defect    %.3e\n", tr.final_el_norm);
    std::printf("sphere defect   %.3e\n", on_sphere_defect(tr.u));
    return tr.reached_tol ? 0 : 1;
}
