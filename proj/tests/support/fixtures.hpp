#ifndef NLFRONT_TEST_FIXTURES_HPP
#define NLFRONT_TEST_FIXTURES_HPP

#include "nlfront/analysis.hpp"
#include "nlfront/statics.hpp"

namespace fixtures {

inline const nlfront::Grid1D& default_grid() {
    static nlfront::Grid1D g = nlfront::Grid1D::make(20.0, 801);
    return g;
}

inline const nlfront::ModelParams& default_params() {
    static nlfront::ModelParams p = nlfront::ModelParams::make(1.5, default_grid());
    return p;
}

inline const nlfront::InstantonData& default_instanton() {
    static nlfront::InstantonData inst =
        nlfront::compute_instanton(default_params(), default_grid());
    return inst;
}

inline const nlfront::AnalysisParams& default_analysis() {
    static nlfront::AnalysisParams ap =
        nlfront::AnalysisParams::make(0.05, default_instanton(), default_params(), 1.0);
    return ap;
}

}  // namespace fixtures

#endif
