#pragma once

#include <json.hpp>

#include "devur/contwave.hpp"
#include "devur/deviation.hpp"
#include "devur/entwit.hpp"
#include "devur/relations.hpp"
#include "devur/steering.hpp"

namespace devur::io {

using Json = nlohmann::ordered_json;

// wire formats: complex scalar = [re, im]; matrix = {rows, cols, data};
// state = {"kind":"pure","amplitudes":[...]} or {"kind":"mixed","matrix":{...}}

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json vec_to_json(const CVec& v);
CVec vec_from_json(const Json& j);

Json mat_to_json(const CMat& m);
CMat mat_from_json(const Json& j);

Json state_to_json(const State& s);
State state_from_json(const Json& j);

Json deviation_report_to_json(const DeviationReport& r);
DeviationReport deviation_report_from_json(const Json& j);

Json relation_verdict_to_json(const RelationVerdict& v);

Json dispersion_to_json(const contwave::DispersionSummary& s);

Json wavefunction_to_json(const contwave::SampledWavefunction& w);
contwave::SampledWavefunction wavefunction_from_json(const Json& j);

Json intelligent_to_json(const contwave::IntelligentProduct& p);

Json inferred_report_to_json(const steering::InferredReport& r);

Json witness_verdict_to_json(const entwit::WitnessVerdict& v);

Json stress_report_to_json(const entwit::StressReport& r);

} // namespace devur::io
