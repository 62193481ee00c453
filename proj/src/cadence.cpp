#include "facepipe/cadence.hpp"

#include "facepipe/error.hpp"

namespace facepipe {

TaskSet tasks_for(const CadencePolicy& policy, int cycle_index) {
    if (!policy.valid())
        throw InvalidInput("cadence periods must be >= 1");
    if (cycle_index < 0)
        throw InvalidInput("cycle index must be >= 0");
    TaskSet s;
    s.age = cycle_index % policy.age_every == 0;
    s.gender = cycle_index % policy.gender_every == 0;
    s.expression = cycle_index % policy.expression_every == 0;
    return s;
}

double expected_cost_ms(const CadencePolicy& policy, double age_ms, double gender_ms,
                        double expression_ms) {
    if (!policy.valid())
        throw InvalidInput("cadence periods must be >= 1");
    if (age_ms < 0.0 || gender_ms < 0.0 || expression_ms < 0.0)
        throw InvalidInput("latencies must be >= 0");
    return age_ms / policy.age_every + gender_ms / policy.gender_every +
           expression_ms / policy.expression_every;
}

} // namespace facepipe
