#ifndef ABK_POPULATION_HPP
#define ABK_POPULATION_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace abk {

enum class Confession { FTC, NonFTC };

inline const char* confession_name(Confession c) { return c == Confession::FTC ? "FTC" : "Non"; }

struct CaseRecord {
    int case_id = 0;
    double rash_day = 0.0;
    int compound = 0;  // compound at record time (post-move for movers)
    Confession confession = Confession::FTC;
    bool vaccinated = false;
};

// Unknown vaccination splits in compounds 4, 5 and 7 are parameterised by
// (i4, i5, i7) with i4+i5+i7 = 4, i4 in {0,1}, i5 in {0,1,2}, i7 in {1,2,3}.
struct VaccinationConfig {
    int i4 = 0, i5 = 0, i7 = 0;
    bool operator==(const VaccinationConfig&) const = default;
};

// All configs satisfying the range and sum constraints, lexicographic order.
std::vector<VaccinationConfig> enumerate_vaccination_configs();

// Census count of the form base + coeff * i_sym. symbol: -1 none, 0..2 -> i4/i5/i7.
struct CellCount {
    long long base = 0;
    int coeff = 0;
    int symbol = -1;
    long long resolve(const VaccinationConfig& cfg) const;
};

struct CompositionRow {
    int compound = 0;  // 0 = outside the compounds
    Confession confession = Confession::FTC;
    CellCount vaccinated;
    CellCount unvaccinated;
};

struct MoveEvent {
    double day = 0.0;
    int from_compound = 0;
    int to_compound = 0;
    int n_vaccinated = 0;
    int n_unvaccinated = 0;
    std::vector<int> case_ids;  // moving cases; the remainder are uninfected
};

enum class VaccStatus { No, Yes, Unknown };

struct Individual {
    int id = 0;
    int compound_pre = 0;   // compound before the move (0 = outside)
    int compound_post = 0;  // compound after the move
    Confession confession = Confession::FTC;
    VaccStatus vaccinated = VaccStatus::No;
    int case_id = -1;  // -1 when never infected
    bool mover = false;
};

// Structured census of the closed population, with the optional single move
// event. Counts in compounds 4/5/7 stay symbolic until resolved by a config.
class Population {
  public:
    static Population build(std::vector<CompositionRow> rows, std::optional<MoveEvent> move,
                            const std::vector<CaseRecord>& cases);

    long long total() const { return total_; }            // N
    long long ftc_total() const { return ftc_total_; }    // n
    long long in_compound_total() const { return in_compound_total_; }
    int max_compound() const { return max_compound_; }

    const std::vector<CompositionRow>& rows() const { return rows_; }
    const std::optional<MoveEvent>& move() const { return move_; }
    const std::vector<CaseRecord>& cases() const { return cases_; }

    // n_{c,f}(t): group size of compound c, confession f at time t, counting
    // every resident (infected or not). Piecewise constant around the move.
    long long group_size(int compound, Confession f, double t) const;

    // Census count of a (compound, confession) cell ignoring the move.
    long long census(int compound, Confession f) const;

    // Per-individual view; ids 0..n_com-1 are inside the compounds.
    const Individual& individual(int id) const;
    long long n_individuals() const { return total_; }
    int individual_of_case(int case_id) const;

    // group_size keyed by individual id; throws for outside-compound ids.
    long long group_size_of(int id, double t) const;

    // Resolved (vaccinated, unvaccinated) census of a cell under a config.
    std::pair<long long, long long> cell_counts(int compound, Confession f,
                                                const VaccinationConfig& cfg) const;

    // Uninfected movers: (vaccinated count, unvaccinated count).
    std::pair<int, int> uninfected_mover_counts() const;

  private:
    std::vector<CompositionRow> rows_;
    std::optional<MoveEvent> move_;
    std::vector<CaseRecord> cases_;
    std::vector<Individual> in_compound_individuals_;  // ids 0..n_com-1
    std::vector<int> case_to_individual_;
    long long total_ = 0, ftc_total_ = 0, in_compound_total_ = 0;
    int max_compound_ = 0;
    // outside layout: [ftc_vacc | ftc_unvacc | non_vacc | non_unvacc]
    long long outside_ftc_vacc_ = 0, outside_ftc_unvacc_ = 0;
    long long outside_non_vacc_ = 0, outside_non_unvacc_ = 0;
    std::map<int, int> outside_case_by_id_;
    mutable Individual scratch_;
};

// Loaders. CSV schemas:
//   cases:      case_id,rash_day,compound,confession,vaccinated
//   population: compound,confession,vaccinated_count,unvaccinated_count
//               (counts may be symbolic, e.g. "2-i4"; compound 0 = outside)
//   moves:      day,from_compound,to_compound,n_vaccinated,n_unvaccinated,case_ids
std::vector<CaseRecord> load_cases(const std::string& path);
std::vector<CompositionRow> load_composition(const std::string& path);
MoveEvent load_move(const std::string& path);

// Composition + optional move + cases, fully cross-validated.
Population load_population(const std::string& composition_path,
                           const std::string& moves_path,
                           const std::vector<CaseRecord>& cases);

}  // namespace abk

#endif
