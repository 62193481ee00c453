#pragma once

namespace facepipe {

enum class Task { age, gender, expression };

/// Per-track task periods, counted in recognition cycles. Expression runs
/// every cycle by default; age and gender are demoted to every fourth
/// cycle, which halves the long-run cost of a face from 600 ms to 300 ms
/// with three 200 ms recognizers.
struct CadencePolicy {
    int expression_every = 1;
    int age_every = 4;
    int gender_every = 4;

    bool valid() const { return expression_every >= 1 && age_every >= 1 && gender_every >= 1; }
};

struct TaskSet {
    bool age = false;
    bool gender = false;
    bool expression = false;

    bool contains(Task t) const {
        switch (t) {
        case Task::age: return age;
        case Task::gender: return gender;
        case Task::expression: return expression;
        }
        return false;
    }
    bool empty() const { return !age && !gender && !expression; }
    int count() const { return (age ? 1 : 0) + (gender ? 1 : 0) + (expression ? 1 : 0); }
};

/// Tasks that run on the given recognition cycle: a task fires when
/// cycle_index is a multiple of its period, so cycle 0 runs everything.
/// Throws InvalidInput on a negative cycle index or an invalid policy.
TaskSet tasks_for(const CadencePolicy& policy, int cycle_index);

/// Long-run mean cost of one recognition cycle for one face, in ms:
/// sum over tasks of latency/period.
double expected_cost_ms(const CadencePolicy& policy, double age_ms, double gender_ms,
                        double expression_ms);

} // namespace facepipe
