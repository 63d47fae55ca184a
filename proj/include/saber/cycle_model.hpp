#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "saber/params.hpp"

// Analytical clock-cycle model of the multiplier datapath: evaluation,
// parallel point multiplication, interpolation, and the lazy matrix-vector
// schedule. Models the multiplier subsystem only; whole-scheme cycle totals
// are out of scope.

namespace saber {

// Point-multiplication latency with n parallel multipliers per MAC unit:
// all 64 output slots are covered in 64/n passes, each pass paying
// n/mem_ports cycles to fetch operand coefficients (dual-port memory by
// default), n cycles to fill the datapath, 64 multiply-accumulate cycles
// and n-1 cycles to drain.
inline std::uint64_t mac_latency(unsigned n_parallel, unsigned mem_ports = 2) {
    if (n_parallel == 0 || 64 % n_parallel != 0 || n_parallel % mem_ports != 0)
        throw std::invalid_argument("mac_latency: invalid multiplier count");
    const std::uint64_t per_pass =
        n_parallel / mem_ports + n_parallel + 64 + (n_parallel - 1);
    return (64 / n_parallel) * per_pass;
}

struct CycleReport {
    unsigned n_parallel;
    std::uint64_t eval_cycles;        // one polynomial evaluation, pipelined
    std::uint64_t eval_extra_cycles;  // evaluation overhead per product
    std::uint64_t pointmul_cycles;    // seven parallel MAC units
    std::uint64_t interp_cycles;      // one interpolation pass
    std::uint64_t per_256mul_cycles;  // worst case for a full 256x256 product
    std::uint64_t matvec_cycles;      // full rank-l matrix-vector product, lazy
};

enum class MulPhase { evaluate, point_multiply, interpolate };

struct SchedulePhase {
    MulPhase kind;
    unsigned row;
    std::uint64_t cycles;
};

// Ordered phase trace for a rank-l matrix-vector product. In the lazy
// schedule each row runs l evaluate + point-multiply pairs and interpolates
// once; the eager reference interpolates after every product.
inline std::vector<SchedulePhase> schedule_matvec(unsigned rank, unsigned n_parallel,
                                                  bool lazy = true) {
    if (rank == 0) throw std::invalid_argument("schedule_matvec: rank must be positive");
    const std::uint64_t mac = mac_latency(n_parallel);
    std::vector<SchedulePhase> trace;
    for (unsigned row = 0; row < rank; ++row) {
        for (unsigned k = 0; k < rank; ++k) {
            trace.push_back({MulPhase::evaluate, row, 64});
            trace.push_back({MulPhase::point_multiply, row, mac});
            if (!lazy) trace.push_back({MulPhase::interpolate, row, 70});
        }
        if (lazy) trace.push_back({MulPhase::interpolate, row, 70});
    }
    return trace;
}

inline std::uint64_t total_cycles(const std::vector<SchedulePhase>& trace) {
    std::uint64_t total = 0;
    for (const auto& phase : trace) total += phase.cycles;
    return total;
}

inline CycleReport multiplier_latency(unsigned n_parallel) {
    CycleReport rep{};
    rep.n_parallel = n_parallel;
    rep.eval_cycles = 64;
    rep.eval_extra_cycles = 60;
    rep.interp_cycles = 70;
    rep.pointmul_cycles = mac_latency(n_parallel);
    rep.per_256mul_cycles =
        rep.pointmul_cycles + rep.eval_extra_cycles + rep.interp_cycles;
    rep.matvec_cycles = total_cycles(schedule_matvec(kSaber.l, n_parallel));
    return rep;
}

inline std::string format_report(const CycleReport& rep) {
    std::string out;
    auto row = [&out](const char* name, std::uint64_t v) {
        out += name;
        out += ": ";
        out += std::to_string(v);
        out += " cycles\n";
    };
    out += "multiplier cycle model (n=" + std::to_string(rep.n_parallel) + ")\n";
    row("  evaluation (per polynomial)", rep.eval_cycles);
    row("  evaluation overhead (per product)", rep.eval_extra_cycles);
    row("  point multiplication", rep.pointmul_cycles);
    row("  interpolation", rep.interp_cycles);
    row("  256x256 product, worst case", rep.per_256mul_cycles);
    row("  rank-3 matrix-vector product, lazy", rep.matvec_cycles);
    return out;
}

}  // namespace saber
