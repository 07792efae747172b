#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace gmxb {

/// Per-event death probabilities q_n and survival probabilities p_n.
///
/// q_n = Pr[death in (t_{n-1}, t_n] | alive at t_{n-1}]; p_0 = 1 and
/// p_n = p_{n-1}(1 − q_n).
class MortalityModel {
public:
    MortalityModel() = default;
    explicit MortalityModel(std::vector<double> death_probabilities);

    static MortalityModel none(std::size_t events) {
        return MortalityModel(std::vector<double>(events, 0.0));
    }

    std::size_t events() const { return q_.size(); }
    // q_n for 1 <= n <= N.
    double q(std::size_t n) const { return q_[n - 1]; }
    // p_n for 0 <= n <= N.
    double p(std::size_t n) const { return p_[n]; }
    bool is_zero() const;

private:
    std::vector<double> q_;
    std::vector<double> p_;
};

// Annual death probabilities keyed by integer age.
using LifeTable = std::map<int, double>;

// Rows "age, q" (comma or whitespace separated); '#' starts a comment. Throws DataError.
LifeTable read_life_table(std::istream& in);
LifeTable read_life_table_file(const std::string& path);

/// Builds q_n for the given event times from annual probabilities.
///
/// Survival is interpolated linearly within each year of age (uniform
/// distribution of deaths), so the sub-annual survival factors of any year
/// multiply back to 1 − q_age. Throws DataError when an age is missing.
MortalityModel mortality_from_life_table(const LifeTable& table, double entry_age,
                                         const std::vector<double>& event_times);

}  // namespace gmxb
