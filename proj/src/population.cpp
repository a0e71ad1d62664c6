#include "abk/population.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "abk/csv.hpp"

namespace abk {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

Confession parse_confession(const std::string& s, const std::string& where) {
    if (s == "FTC") return Confession::FTC;
    if (s == "Non" || s == "NonFTC" || s == "non-FTC") return Confession::NonFTC;
    fail(where + ": unknown confession '" + s + "'");
}

bool parse_yesno(const std::string& s, const std::string& where) {
    if (s == "Yes" || s == "yes" || s == "1") return true;
    if (s == "No" || s == "no" || s == "0") return false;
    fail(where + ": expected Yes/No, got '" + s + "'");
}

// Accepts "12", "2-i4", "28+i7" and similar.
CellCount parse_cell_count(const std::string& s, const std::string& where) {
    CellCount c;
    auto sym_at = [&](size_t pos) -> int {
        std::string sym = s.substr(pos);
        if (sym == "i4") return 0;
        if (sym == "i5") return 1;
        if (sym == "i7") return 2;
        fail(where + ": unknown symbol '" + sym + "' in '" + s + "'");
    };
    size_t plus = s.find('+');
    size_t minus = s.find('-', 1);  // allow leading minus to fail as a count below
    if (plus != std::string::npos) {
        c.base = parse_int(s.substr(0, plus), where);
        c.coeff = 1;
        c.symbol = sym_at(plus + 1);
    } else if (minus != std::string::npos) {
        c.base = parse_int(s.substr(0, minus), where);
        c.coeff = -1;
        c.symbol = sym_at(minus + 1);
    } else {
        c.base = parse_int(s, where);
    }
    return c;
}

}  // namespace

long long CellCount::resolve(const VaccinationConfig& cfg) const {
    if (symbol < 0) return base;
    int val = symbol == 0 ? cfg.i4 : symbol == 1 ? cfg.i5 : cfg.i7;
    return base + static_cast<long long>(coeff) * val;
}

std::vector<VaccinationConfig> enumerate_vaccination_configs() {
    std::vector<VaccinationConfig> out;
    for (int i4 = 0; i4 <= 1; ++i4)
        for (int i5 = 0; i5 <= 2; ++i5)
            for (int i7 = 1; i7 <= 3; ++i7)
                if (i4 + i5 + i7 == 4) out.push_back({i4, i5, i7});
    return out;
}

std::vector<CaseRecord> load_cases(const std::string& path) {
    CsvTable t = read_csv(path);
    if (t.header != std::vector<std::string>{"case_id", "rash_day", "compound", "confession", "vaccinated"})
        fail(path + ": unexpected header");
    std::vector<CaseRecord> cases;
    std::set<int> seen;
    double min_rash = 1e300;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        std::string where = path + ":" + std::to_string(t.line_numbers[r]);
        const auto& f = t.rows[r];
        CaseRecord c;
        c.case_id = static_cast<int>(parse_int(f[0], where));
        c.rash_day = parse_double(f[1], where);
        c.compound = static_cast<int>(parse_int(f[2], where));
        c.confession = parse_confession(f[3], where);
        c.vaccinated = parse_yesno(f[4], where);
        if (c.rash_day < 0.0) fail(where + ": negative rash day");
        if (c.compound <= 0) fail(where + ": case must live in a compound");
        if (!seen.insert(c.case_id).second) fail(where + ": duplicate case id " + std::to_string(c.case_id));
        min_rash = std::min(min_rash, c.rash_day);
        cases.push_back(c);
    }
    if (cases.empty()) fail(path + ": no cases");
    for (size_t k = 0; k < cases.size(); ++k)
        if (!seen.count(static_cast<int>(k))) fail(path + ": case ids not contiguous from 0");
    std::sort(cases.begin(), cases.end(),
              [](const CaseRecord& a, const CaseRecord& b) { return a.case_id < b.case_id; });
    if (min_rash != 0.0) fail(path + ": day 0 must be anchored at the first rash");
    return cases;
}

std::vector<CompositionRow> load_composition(const std::string& path) {
    CsvTable t = read_csv(path);
    if (t.header != std::vector<std::string>{"compound", "confession", "vaccinated_count", "unvaccinated_count"})
        fail(path + ": unexpected header");
    std::vector<CompositionRow> rows;
    std::set<std::pair<int, int>> seen;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        std::string where = path + ":" + std::to_string(t.line_numbers[r]);
        const auto& f = t.rows[r];
        CompositionRow row;
        row.compound = static_cast<int>(parse_int(f[0], where));
        row.confession = parse_confession(f[1], where);
        row.vaccinated = parse_cell_count(f[2], where);
        row.unvaccinated = parse_cell_count(f[3], where);
        if (row.compound < 0) fail(where + ": negative compound id");
        if (row.compound == 0 && (row.vaccinated.symbol >= 0 || row.unvaccinated.symbol >= 0))
            fail(where + ": outside counts must be concrete integers");
        if (!seen.insert({row.compound, static_cast<int>(row.confession)}).second)
            fail(where + ": duplicate composition cell");
        rows.push_back(row);
    }
    return rows;
}

MoveEvent load_move(const std::string& path) {
    CsvTable t = read_csv(path);
    if (t.header != std::vector<std::string>{"day", "from_compound", "to_compound", "n_vaccinated",
                                             "n_unvaccinated", "case_ids"})
        fail(path + ": unexpected header");
    if (t.rows.size() != 1) fail(path + ": expected exactly one move event");
    std::string where = path + ":" + std::to_string(t.line_numbers[0]);
    const auto& f = t.rows[0];
    MoveEvent m;
    m.day = parse_double(f[0], where);
    m.from_compound = static_cast<int>(parse_int(f[1], where));
    m.to_compound = static_cast<int>(parse_int(f[2], where));
    m.n_vaccinated = static_cast<int>(parse_int(f[3], where));
    m.n_unvaccinated = static_cast<int>(parse_int(f[4], where));
    std::stringstream ss(f[5]);
    std::string tok;
    while (std::getline(ss, tok, ';'))
        if (!tok.empty()) m.case_ids.push_back(static_cast<int>(parse_int(tok, where)));
    if (m.from_compound <= 0 || m.to_compound <= 0 || m.from_compound == m.to_compound)
        fail(where + ": move must connect two distinct compounds");
    if (m.n_vaccinated < 0 || m.n_unvaccinated < 0 || m.n_vaccinated + m.n_unvaccinated <= 0)
        fail(where + ": bad mover counts");
    return m;
}

Population Population::build(std::vector<CompositionRow> rows, std::optional<MoveEvent> move,
                             const std::vector<CaseRecord>& cases) {
    Population p;
    p.rows_ = std::move(rows);
    p.move_ = std::move(move);
    p.cases_ = cases;

    auto configs = enumerate_vaccination_configs();
    bool any_symbolic = false;
    for (const auto& row : p.rows_) {
        if (row.vaccinated.symbol >= 0 || row.unvaccinated.symbol >= 0) any_symbolic = true;
        if (row.vaccinated.coeff + row.unvaccinated.coeff != 0 ||
            (row.vaccinated.symbol >= 0 && row.unvaccinated.symbol >= 0 &&
             row.vaccinated.symbol != row.unvaccinated.symbol))
            fail("composition cell total must not depend on the config (compound " +
                 std::to_string(row.compound) + ")");
        for (const auto& cfg : configs) {
            if (row.vaccinated.resolve(cfg) < 0 || row.unvaccinated.resolve(cfg) < 0)
                fail("negative resolved count in compound " + std::to_string(row.compound));
            if (!any_symbolic) break;
        }
        p.max_compound_ = std::max(p.max_compound_, row.compound);
    }

    VaccinationConfig cfg0 = configs.front();
    for (const auto& row : p.rows_) {
        long long cell = row.vaccinated.resolve(cfg0) + row.unvaccinated.resolve(cfg0);
        p.total_ += cell;
        if (row.confession == Confession::FTC) p.ftc_total_ += cell;
        if (row.compound > 0) p.in_compound_total_ += cell;
        if (row.compound == 0) {
            if (row.confession == Confession::FTC) {
                p.outside_ftc_vacc_ = row.vaccinated.base;
                p.outside_ftc_unvacc_ = row.unvaccinated.base;
            } else {
                p.outside_non_vacc_ = row.vaccinated.base;
                p.outside_non_unvacc_ = row.unvaccinated.base;
            }
        }
    }

    // Case placement bookkeeping per (compound, confession) cell, keyed on the
    // pre-move compound for movers.
    std::set<int> mover_case_ids;
    int mover_case_vacc = 0, mover_case_unvacc = 0;
    if (p.move_) {
        for (int cid : p.move_->case_ids) {
            if (cid < 0 || cid >= static_cast<int>(cases.size()))
                fail("move references unknown case " + std::to_string(cid));
            const CaseRecord& c = cases[cid];
            if (c.compound != p.move_->to_compound)
                fail("mover case " + std::to_string(cid) + " must be recorded in the destination compound");
            if (c.confession != Confession::FTC) fail("movers must be FTC");
            mover_case_ids.insert(cid);
            (c.vaccinated ? mover_case_vacc : mover_case_unvacc)++;
        }
        if (mover_case_vacc > p.move_->n_vaccinated || mover_case_unvacc > p.move_->n_unvaccinated)
            fail("mover case vaccination statuses exceed the declared mover counts");
    }

    std::map<std::pair<int, int>, std::vector<int>> cell_cases;  // (compound_pre, conf) -> case ids
    for (const auto& c : cases) {
        int pre = c.compound;
        if (mover_case_ids.count(c.case_id)) pre = p.move_->from_compound;
        cell_cases[{pre, static_cast<int>(c.confession)}].push_back(c.case_id);
    }

    // Feasibility: enough members of each vaccination status in every cell for
    // every admissible config.
    for (const auto& [key, ids] : cell_cases) {
        auto [cmp, confi] = key;
        Confession f = static_cast<Confession>(confi);
        int need_vacc = 0, need_unvacc = 0;
        for (int cid : ids) (cases[cid].vaccinated ? need_vacc : need_unvacc)++;
        if (p.move_ && cmp == p.move_->from_compound && f == Confession::FTC) {
            need_vacc += p.move_->n_vaccinated - mover_case_vacc;
            need_unvacc += p.move_->n_unvaccinated - mover_case_unvacc;
        }
        for (const auto& cfg : configs) {
            auto [nv, nu] = p.cell_counts(cmp, f, cfg);
            if (need_vacc > nv || need_unvacc > nu)
                fail("cases do not fit composition cell (compound " + std::to_string(cmp) + ")");
            if (!any_symbolic) break;
        }
    }

    // Lay out in-compound individuals: per compound, FTC then non-FTC; within a
    // cell the cases come first, then uninfected movers, then the remainder.
    p.case_to_individual_.assign(cases.size(), -1);
    int next_id = 0;
    for (int cmp = 1; cmp <= p.max_compound_; ++cmp) {
        for (Confession f : {Confession::FTC, Confession::NonFTC}) {
            long long cell_total = p.census(cmp, f);
            if (cell_total == 0) continue;
            bool symbolic = false;
            for (const auto& row : p.rows_)
                if (row.compound == cmp && row.confession == f && row.vaccinated.symbol >= 0) symbolic = true;
            auto [nv0, nu0] = p.cell_counts(cmp, f, cfg0);

            long long placed = 0, placed_vacc = 0, placed_unvacc = 0;
            auto it = cell_cases.find({cmp, static_cast<int>(f)});
            if (it != cell_cases.end()) {
                std::sort(it->second.begin(), it->second.end());
                for (int cid : it->second) {
                    Individual ind;
                    ind.id = next_id;
                    ind.compound_pre = cmp;
                    ind.compound_post = mover_case_ids.count(cid) ? p.move_->to_compound : cmp;
                    ind.confession = f;
                    ind.vaccinated = cases[cid].vaccinated ? VaccStatus::Yes : VaccStatus::No;
                    ind.case_id = cid;
                    ind.mover = mover_case_ids.count(cid) > 0;
                    p.case_to_individual_[cid] = next_id;
                    p.in_compound_individuals_.push_back(ind);
                    next_id++;
                    placed++;
                    (cases[cid].vaccinated ? placed_vacc : placed_unvacc)++;
                }
            }
            if (p.move_ && cmp == p.move_->from_compound && f == Confession::FTC) {
                int extra_vacc = p.move_->n_vaccinated - mover_case_vacc;
                int extra_unvacc = p.move_->n_unvaccinated - mover_case_unvacc;
                for (int k = 0; k < extra_vacc + extra_unvacc; ++k) {
                    Individual ind;
                    ind.id = next_id;
                    ind.compound_pre = cmp;
                    ind.compound_post = p.move_->to_compound;
                    ind.confession = f;
                    ind.vaccinated = k < extra_vacc ? VaccStatus::Yes : VaccStatus::No;
                    ind.mover = true;
                    p.in_compound_individuals_.push_back(ind);
                    next_id++;
                    placed++;
                    (k < extra_vacc ? placed_vacc : placed_unvacc)++;
                }
            }
            for (long long k = placed; k < cell_total; ++k) {
                Individual ind;
                ind.id = next_id;
                ind.compound_pre = cmp;
                ind.compound_post = cmp;
                ind.confession = f;
                if (symbolic)
                    ind.vaccinated = VaccStatus::Unknown;
                else
                    ind.vaccinated = (placed_vacc < nv0) ? VaccStatus::Yes : VaccStatus::No;
                (ind.vaccinated == VaccStatus::Yes ? placed_vacc : placed_unvacc)++;
                p.in_compound_individuals_.push_back(ind);
                next_id++;
            }
        }
    }
    if (next_id != p.in_compound_total_) fail("in-compound layout does not match census totals");

    // Outside-compound cases (possible in simulated datasets) occupy the
    // leading ids of their (confession, vaccination) slice of the outside
    // range.
    long long limits[4] = {p.outside_ftc_vacc_, p.outside_ftc_unvacc_, p.outside_non_vacc_,
                           p.outside_non_unvacc_};
    long long offsets[4] = {0, limits[0], limits[0] + limits[1], limits[0] + limits[1] + limits[2]};
    long long used[4] = {0, 0, 0, 0};
    for (Confession f : {Confession::FTC, Confession::NonFTC}) {
        auto it = cell_cases.find({0, static_cast<int>(f)});
        if (it == cell_cases.end()) continue;
        std::sort(it->second.begin(), it->second.end());
        for (int cid : it->second) {
            int slot = (f == Confession::FTC ? 0 : 2) + (cases[cid].vaccinated ? 0 : 1);
            if (used[slot] >= limits[slot]) fail("cases do not fit the outside census");
            long long id = p.in_compound_total_ + offsets[slot] + used[slot]++;
            p.case_to_individual_[cid] = static_cast<int>(id);
            p.outside_case_by_id_[static_cast<int>(id)] = cid;
        }
    }
    for (size_t cid = 0; cid < cases.size(); ++cid)
        if (p.case_to_individual_[cid] < 0) fail("case placement failed");
    return p;
}

long long Population::census(int compound, Confession f) const {
    long long total = 0;
    VaccinationConfig cfg0 = enumerate_vaccination_configs().front();
    for (const auto& row : rows_)
        if (row.compound == compound && row.confession == f)
            total += row.vaccinated.resolve(cfg0) + row.unvaccinated.resolve(cfg0);
    return total;
}

long long Population::group_size(int compound, Confession f, double t) const {
    long long size = census(compound, f);
    if (move_ && f == Confession::FTC && t >= move_->day) {
        int n_movers = move_->n_vaccinated + move_->n_unvaccinated;
        if (compound == move_->from_compound) size -= n_movers;
        if (compound == move_->to_compound) size += n_movers;
    }
    return size;
}

std::pair<long long, long long> Population::cell_counts(int compound, Confession f,
                                                        const VaccinationConfig& cfg) const {
    long long nv = 0, nu = 0;
    for (const auto& row : rows_)
        if (row.compound == compound && row.confession == f) {
            nv += row.vaccinated.resolve(cfg);
            nu += row.unvaccinated.resolve(cfg);
        }
    return {nv, nu};
}

std::pair<int, int> Population::uninfected_mover_counts() const {
    if (!move_) return {0, 0};
    int mover_case_vacc = 0, mover_case_unvacc = 0;
    for (int cid : move_->case_ids) (cases_[cid].vaccinated ? mover_case_vacc : mover_case_unvacc)++;
    return {move_->n_vaccinated - mover_case_vacc, move_->n_unvaccinated - mover_case_unvacc};
}

const Individual& Population::individual(int id) const {
    if (id < 0 || id >= total_) fail("individual id out of range: " + std::to_string(id));
    if (id < in_compound_total_) return in_compound_individuals_[id];
    long long off = id - in_compound_total_;
    scratch_ = Individual{};
    scratch_.id = id;
    scratch_.compound_pre = 0;
    scratch_.compound_post = 0;
    if (off < outside_ftc_vacc_ + outside_ftc_unvacc_) {
        scratch_.confession = Confession::FTC;
        scratch_.vaccinated = off < outside_ftc_vacc_ ? VaccStatus::Yes : VaccStatus::No;
    } else {
        off -= outside_ftc_vacc_ + outside_ftc_unvacc_;
        scratch_.confession = Confession::NonFTC;
        scratch_.vaccinated = off < outside_non_vacc_ ? VaccStatus::Yes : VaccStatus::No;
    }
    auto itc = outside_case_by_id_.find(id);
    if (itc != outside_case_by_id_.end()) scratch_.case_id = itc->second;
    return scratch_;
}

int Population::individual_of_case(int case_id) const {
    if (case_id < 0 || case_id >= static_cast<int>(case_to_individual_.size()))
        fail("unknown case id " + std::to_string(case_id));
    return case_to_individual_[case_id];
}

long long Population::group_size_of(int id, double t) const {
    const Individual& ind = individual(id);
    int cmp = t >= (move_ ? move_->day : 1e300) ? ind.compound_post : ind.compound_pre;
    if (cmp == 0) fail("individual " + std::to_string(id) + " lives outside the compounds: no compound group");
    return group_size(cmp, ind.confession, t);
}

Population load_population(const std::string& composition_path, const std::string& moves_path,
                           const std::vector<CaseRecord>& cases) {
    auto rows = load_composition(composition_path);
    MoveEvent move = load_move(moves_path);
    Population p = Population::build(std::move(rows), move, cases);

    // Dataset-level totals from the source tables.
    auto expect = [](long long got, long long want, const std::string& what) {
        if (got != want)
            fail(what + " mismatch: expected " + std::to_string(want) + ", got " + std::to_string(got));
    };
    expect(p.ftc_total(), 120, "FTC total");
    expect(p.total() - p.ftc_total(), 31080, "non-FTC total");
    expect(p.in_compound_total(), 251, "in-compound total");
    expect(p.total(), 31200, "population total");
    return p;
}

}  // namespace abk
