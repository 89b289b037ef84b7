#pragma once
// Everything derived from a rule in one place: the working power of the
// rule, Perron data, the collared complex, cohomology, the spectral split
// and the invariant measure on words.

#include "wieler/ap_complex.hpp"
#include "wieler/spectral.hpp"
#include "wieler/substitution.hpp"

#include <cstddef>

namespace wieler {

struct AnalysisOptions {
    int collar_depth = 1;
    std::size_t measure_length = 14;
};

struct Analysis {
    SubstitutionRule input;
    PreparedRule prepared;
    SubstitutionRule rule;  // the working power
    PerronData pd;
    APComplex complex;
    CohomologyData cohomology;
    SpectralClassification spectrum;
    InvariantMeasure measure;

    [[nodiscard]] double lambda() const { return pd.lambda; }
};

inline Analysis analyze(const SubstitutionRule& input, const AnalysisOptions& opt = {}) {
    Analysis a;
    a.input = input;
    a.prepared = prepare(input);
    a.rule = a.prepared.rule;
    a.pd = perron_data(a.rule);
    a.complex = build_ap_complex(collar_rule(a.rule, opt.collar_depth), a.pd);
    a.cohomology = cohomology_direct_limit(a.complex, &a.pd.matrix);
    a.spectrum = classify_spectrum(a.cohomology.A_ER, a.pd);
    a.measure = invariant_measure(a.rule, opt.measure_length);
    return a;
}

}  // namespace wieler
