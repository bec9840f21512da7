#pragma once

#include <vector>

#include "squidflux/statics.hpp"

namespace squidflux {

/// Mutual inductances tying the bias line, the SQUID loop and the qubit.
struct CouplingNetwork {
    double m12;  // bias line -> SQUID, H
    double m13;  // bias line -> qubit, H
    double m23;  // SQUID -> qubit, H
    double l;    // SQUID loop self-inductance, H

    void validate() const;
};

struct TransmonModel {
    double f01_max;   // GHz
    double ec = 0.0;  // charging-energy correction, GHz

    void validate() const;
};

/// Flux delivered to the qubit by the SQUID's persistent current at xe = 0:
/// M23 * I / phi0 with I = squid_flux * phi0 / L. Both fluxes in phi0 units.
[[nodiscard]] double qubit_flux(double squid_flux, const CouplingNetwork& net);

/// f01 = (f01_max + Ec) sqrt(|cos(pi * qubit_flux)|) - Ec, GHz.
[[nodiscard]] double f01(double qubit_flux, const TransmonModel& model);

struct InferredState {
    double qubit_flux;    // phi0
    double squid_flux;    // phi0
    int nearest_index;    // well with the closest predicted f01
    double f01_residual;  // GHz
};

/// Inverts the frequency map on the monotone branch and snaps to the nearest
/// well. Throws std::domain_error for f01 outside (0, f01_max].
[[nodiscard]] InferredState infer_squid_state(double f01_measured, const TransmonModel& model,
                                              const CouplingNetwork& net);

/// Transient qubit flux while a pulse of the given SQUID-referred amplitude
/// rides the bias line: amplitude * M13 / M12.
[[nodiscard]] double bias_line_crosstalk(double pulse_amplitude, const CouplingNetwork& net);

struct CensusRow {
    int index;
    double squid_flux;  // phi0
    double qubit_flux;  // phi0
    double f01;         // GHz
};

/// Full well census mapped through the coupling network and frequency model.
[[nodiscard]] std::vector<CensusRow> qubit_census(const SquidParams& p,
                                                  const CouplingNetwork& net,
                                                  const TransmonModel& model);

}  // namespace squidflux
