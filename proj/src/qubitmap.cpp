#include "squidflux/qubitmap.hpp"

#include <cmath>
#include <stdexcept>

namespace squidflux {

void CouplingNetwork::validate() const {
    if (!(m12 > 0.0) || !(m13 > 0.0) || !(m23 > 0.0) || !(l > 0.0)) {
        throw std::invalid_argument("CouplingNetwork: all inductances must be > 0");
    }
}

void TransmonModel::validate() const {
    if (!(f01_max > 0.0)) {
        throw std::invalid_argument("TransmonModel: f01_max must be > 0");
    }
}

double qubit_flux(double squid_flux, const CouplingNetwork& net) {
    return squid_flux * net.m23 / net.l;
}

double f01(double qf, const TransmonModel& model) {
    return (model.f01_max + model.ec) * std::sqrt(std::abs(std::cos(kPi * qf))) - model.ec;
}

InferredState infer_squid_state(double f01_measured, const TransmonModel& model,
                                const CouplingNetwork& net) {
    model.validate();
    if (f01_measured > model.f01_max) {
        throw std::domain_error("infer_squid_state: measured f01 above the model maximum");
    }
    if (!(f01_measured > 0.0)) {
        throw std::domain_error("infer_squid_state: measured f01 must be positive");
    }
    const double c = (f01_measured + model.ec) / (model.f01_max + model.ec);
    InferredState st;
    st.qubit_flux = std::acos(c * c) / kPi;
    st.squid_flux = st.qubit_flux * net.l / net.m23;
    st.nearest_index = static_cast<int>(std::lround(st.squid_flux));
    st.f01_residual =
        std::abs(f01(qubit_flux(static_cast<double>(st.nearest_index), net), model) -
                 f01_measured);
    return st;
}

double bias_line_crosstalk(double pulse_amplitude, const CouplingNetwork& net) {
    return pulse_amplitude * net.m13 / net.m12;
}

std::vector<CensusRow> qubit_census(const SquidParams& p, const CouplingNetwork& net,
                                    const TransmonModel& model) {
    net.validate();
    model.validate();
    const WellCensus census = enumerate_wells(p, 0.0);
    std::vector<CensusRow> rows;
    rows.reserve(census.wells.size());
    for (const WellState& w : census.wells) {
        CensusRow row;
        row.index = w.index;
        row.squid_flux = w.flux;
        row.qubit_flux = qubit_flux(w.flux, net);
        row.f01 = f01(row.qubit_flux, model);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace squidflux
