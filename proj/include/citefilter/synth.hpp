#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "citefilter/count_dist.hpp"
#include "citefilter/doi.hpp"
#include "citefilter/errors.hpp"
#include "citefilter/record.hpp"
#include "citefilter/rng.hpp"

namespace citefilter {

// One synthetic field: journal pool size, yearly output, and the target
// magnitudes its indicator row should reproduce. mcs_target and mrs_target
// are the means over ALL publications of the field (uncovered readership
// counting as 0), matching how the indicators module computes MCS/MRS.
struct SynthField {
    std::string field_id;
    int n_journals = 0;
    int n_pubs_per_year = 0;
    double mcs_target = 0.0;
    double mrs_target = 0.0;
    double coverage_target = 0.0;
};

// Generator parameters. `coupling` is the Gaussian-copula parameter between
// the per-publication citation and readership latents; `journal_effect` is
// the share of citation-latent variance carried by journal identity;
// `dispersion` is the negative binomial size (smaller = more skew).
struct SynthSpec {
    std::vector<SynthField> fields;
    int year_start = 2004;
    int year_end = 2013;
    double coupling = 0.0;
    double journal_effect = 0.0;
    double dispersion = 1.5;
    std::uint64_t seed = 0;
};

inline void validate(const SynthSpec& spec) {
    if (spec.fields.empty()) throw BadSpec("spec has no fields");
    if (spec.year_start > spec.year_end) throw BadSpec("year range is empty");
    if (spec.coupling < -1.0 || spec.coupling > 1.0)
        throw BadSpec("coupling must lie in [-1,1]");
    if (spec.journal_effect < 0.0 || spec.journal_effect > 1.0)
        throw BadSpec("journal_effect is a variance share and must lie in [0,1]");
    if (!(spec.dispersion > 0.0)) throw BadSpec("dispersion must be positive");
    for (const auto& f : spec.fields) {
        if (f.field_id.empty()) throw BadSpec("field with empty id");
        if (f.n_journals < 1 || f.n_pubs_per_year < 1)
            throw BadSpec("field " + f.field_id + ": needs journals and publications");
        if (!(f.mcs_target > 0.0) || !(f.mrs_target > 0.0))
            throw BadSpec("field " + f.field_id + ": targets must be positive");
        if (!(f.coverage_target > 0.0) || f.coverage_target > 1.0)
            throw BadSpec("field " + f.field_id + ": coverage_target must lie in (0,1]");
    }
}

// Seeded synthetic corpus with field/year structure.
//
// Per publication, the citation latent combines a per-journal normal (weight
// sqrt(journal_effect)) with an individual normal; the readership latent is
// copula-coupled to it with parameter `coupling`. Both uniforms then map
// through negative binomial quantile tables calibrated to the field targets.
// Coverage follows the readership latent: the bottom (1 - coverage_target)
// quantile is absent from the catalog, and covered publications draw a
// zero-truncated count, so the generated coverage statistic matches the
// target exactly in expectation. Output order is canonical (field, year,
// index) and a fixed seed reproduces the corpus byte for byte.
inline std::vector<PublicationRecord> generate(const SynthSpec& spec) {
    validate(spec);
    const double w = spec.journal_effect;
    const double rho = spec.coupling;
    const double journal_scale = std::sqrt(w);
    const double indiv_scale = std::sqrt(1.0 - w);
    const double noise_scale = std::sqrt(1.0 - rho * rho);

    std::vector<PublicationRecord> records;
    std::int64_t total = 0;
    for (const auto& f : spec.fields)
        total += static_cast<std::int64_t>(f.n_pubs_per_year) * (spec.year_end - spec.year_start + 1);
    records.reserve(static_cast<std::size_t>(total));

    for (std::size_t fi = 0; fi < spec.fields.size(); ++fi) {
        const auto& field = spec.fields[fi];
        const NegBinomialTable citation_dist(field.mcs_target, spec.dispersion);
        const double read_mu =
            calibrate_zero_truncated_mu(field.mrs_target, field.coverage_target, spec.dispersion);
        const NegBinomialTable readership_dist(read_mu, spec.dispersion, /*zero_truncated=*/true);

        std::vector<double> journal_latent(static_cast<std::size_t>(field.n_journals));
        for (int j = 0; j < field.n_journals; ++j) {
            rng::Stream stream(rng::derive(spec.seed, rng::hash_label("journal"),
                                           static_cast<std::uint64_t>(fi),
                                           static_cast<std::uint64_t>(j)));
            journal_latent[static_cast<std::size_t>(j)] = stream.next_normal();
        }

        for (int year = spec.year_start; year <= spec.year_end; ++year) {
            for (int i = 0; i < field.n_pubs_per_year; ++i) {
                rng::Stream stream(rng::derive(spec.seed, rng::hash_label("pub"),
                                               static_cast<std::uint64_t>(fi),
                                               static_cast<std::uint64_t>(year),
                                               static_cast<std::uint64_t>(i)));
                const int journal =
                    std::min(field.n_journals - 1,
                             static_cast<int>(stream.next_double() * field.n_journals));
                const auto [z_indiv, z_noise] = stream.next_normal_pair();
                const double z_cit =
                    journal_scale * journal_latent[static_cast<std::size_t>(journal)] +
                    indiv_scale * z_indiv;
                const double z_read = rho * z_cit + noise_scale * z_noise;
                const double u_cit = rng::normal_cdf(z_cit);
                const double u_read = rng::normal_cdf(z_read);

                PublicationRecord r;
                r.id = Doi("10.9999/" + field.field_id + "." + std::to_string(year) + "." +
                           std::to_string(i));
                r.pub_year = year;
                r.doc_type = DocType::article;
                r.journal_id = field.field_id + "-j" + std::to_string(journal);
                r.field_memberships = {{field.field_id, 1.0}};
                r.citations = citation_dist.quantile(u_cit);
                if (u_read > 1.0 - field.coverage_target) {
                    const double u_covered =
                        (u_read - (1.0 - field.coverage_target)) / field.coverage_target;
                    r.readership = readership_dist.quantile(std::clamp(u_covered, 1e-15, 1.0));
                }
                records.push_back(std::move(r));
            }
        }
    }
    return records;
}

// Five-field spec mirroring the observed per-field MCS/MRS/coverage
// contrasts: a large high-citation biomedical field, readership-dense life
// and social science fields, and a small low-coverage low-density
// mathematics-like field. The coupling is high enough that per-publication
// readership out-ranks journal means as a highly-cited filter.
inline SynthSpec preset_five_field(std::uint64_t seed) {
    SynthSpec spec;
    spec.fields = {
        {"biomedical_health", 160, 7180, 20.18, 13.60, 0.9080},
        {"life_earth", 80, 3250, 17.63, 18.64, 0.9306},
        {"math_cs", 60, 1848, 8.00, 7.52, 0.7691},
        {"natural_eng", 140, 6188, 15.16, 8.21, 0.8370},
        {"social_humanities", 60, 1536, 10.28, 18.14, 0.9238},
    };
    spec.year_start = 2004;
    spec.year_end = 2013;
    spec.coupling = 0.75;
    spec.journal_effect = 0.25;
    spec.dispersion = 1.5;
    spec.seed = seed;
    return spec;
}

}  // namespace citefilter
