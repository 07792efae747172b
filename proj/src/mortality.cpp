#include "gmxb/model/mortality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gmxb/errors.hpp"

namespace gmxb {

MortalityModel::MortalityModel(std::vector<double> death_probabilities)
    : q_(std::move(death_probabilities)) {
    p_.resize(q_.size() + 1);
    p_[0] = 1.0;
    for (std::size_t n = 0; n < q_.size(); ++n) {
        if (!(q_[n] >= 0.0 && q_[n] <= 1.0)) {
            throw ParameterError("mortality: death probabilities must lie in [0, 1]");
        }
        p_[n + 1] = p_[n] * (1.0 - q_[n]);
    }
}

bool MortalityModel::is_zero() const {
    for (double v : q_) {
        if (v != 0.0) return false;
    }
    return true;
}

LifeTable read_life_table(std::istream& in) {
    LifeTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (auto& ch : line) {
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        }
        std::istringstream row(line);
        double age = 0.0;
        double q = 0.0;
        if (!(row >> age)) continue;
        if (!(row >> q)) {
            throw DataError("life table line " + std::to_string(line_no) + ": missing probability");
        }
        if (age != std::floor(age) || age < 0.0) {
            throw DataError("life table line " + std::to_string(line_no) +
                            ": age must be a non-negative integer");
        }
        if (!(q >= 0.0 && q <= 1.0)) {
            throw DataError("life table line " + std::to_string(line_no) +
                            ": probability outside [0, 1]");
        }
        table[static_cast<int>(age)] = q;
    }
    if (table.empty()) throw DataError("life table: no rows");
    return table;
}

LifeTable read_life_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("life table: cannot open " + path);
    return read_life_table(in);
}

namespace {

// Survival from entry_age to entry_age + t, linear within each year of age.
class SurvivalCurve {
public:
    SurvivalCurve(const LifeTable& table, double entry_age) : table_(table), x_(entry_age) {}

    double operator()(double t) const {
        const double age = x_ + t;
        double start = x_;
        double s = 1.0;
        while (start < age - 1e-12) {
            const double year = std::floor(start + 1e-12);
            const double end = std::min(year + 1.0, age);
            const double q = lookup(static_cast<int>(year));
            // l(a) linear on [year, year+1]: l(a)/l(year) = 1 − (a − year) q.
            const double l_start = 1.0 - (start - year) * q;
            const double l_end = 1.0 - (end - year) * q;
            if (l_start <= 0.0) return 0.0;
            s *= l_end / l_start;
            start = end;
        }
        return s;
    }

private:
    double lookup(int age) const {
        auto it = table_.find(age);
        if (it == table_.end()) throw DataError("life table: missing age " + std::to_string(age));
        return it->second;
    }

    const LifeTable& table_;
    double x_;
};

}  // namespace

MortalityModel mortality_from_life_table(const LifeTable& table, double entry_age,
                                         const std::vector<double>& event_times) {
    if (event_times.size() < 2) throw ParameterError("mortality: need at least one event");
    SurvivalCurve survival(table, entry_age);
    std::vector<double> q(event_times.size() - 1);
    double prev = survival(event_times[0]);
    for (std::size_t n = 1; n < event_times.size(); ++n) {
        const double cur = survival(event_times[n]);
        q[n - 1] = prev > 0.0 ? std::clamp(1.0 - cur / prev, 0.0, 1.0) : 1.0;
        prev = cur;
    }
    return MortalityModel(std::move(q));
}

}  // namespace gmxb
