#pragma once

// Deterministic offline provider. A persona model maps each participant's
// true responses to synthetic ratings: echoing them, correlating with them
// through a latent signal, or translating them by a fixed normalized
// shift; refusals and malformed text can be injected at fixed rates.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "silicon/provider_gateway.hpp"
#include "silicon/study_model.hpp"

namespace silicon::gateway {

struct PersonaModel {
    enum class Kind { echo_human, latent_correlation, shift };
    Kind kind = Kind::echo_human;
    double rho = 0.8;          // latent_correlation: target correlation with truth
    double shift = 0.0;        // shift: translation on the normalized score scale
    double noise_per_temp = 0.0;  // item-level noise sd per unit temperature
    double effort_low_noise = 0.0;
    double effort_high_noise = 0.0;
    double refusal_rate = 0.0;
    double malformed_rate = 0.0;

    static PersonaModel from_json(const nlohmann::json& doc) {
        PersonaModel p;
        const auto kind = doc.value("kind", std::string("echo_human"));
        if (kind == "echo_human")
            p.kind = Kind::echo_human;
        else if (kind == "latent_correlation")
            p.kind = Kind::latent_correlation;
        else if (kind == "shift")
            p.kind = Kind::shift;
        else
            throw std::invalid_argument("unknown persona kind: " + kind);
        p.rho = doc.value("rho", p.rho);
        p.shift = doc.value("shift", p.shift);
        p.noise_per_temp = doc.value("noise_per_temp", p.noise_per_temp);
        p.effort_low_noise = doc.value("effort_low_noise", p.effort_low_noise);
        p.effort_high_noise = doc.value("effort_high_noise", p.effort_high_noise);
        p.refusal_rate = doc.value("refusal_rate", p.refusal_rate);
        p.malformed_rate = doc.value("malformed_rate", p.malformed_rate);
        return p;
    }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    a ^= b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2);
    return a;
}

inline double unit_uniform(std::uint64_t h) {
    // splitmix-style finalizer, then map the top 53 bits to [0,1)
    h += 0x9e3779b97f4a7c15ULL;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return static_cast<double>(h >> 11) / 9007199254740992.0;
}

inline double gauss(std::uint64_t h) {
    const double u1 = std::max(unit_uniform(h), 1e-300);
    const double u2 = unit_uniform(mix(h, 0x5bf03635ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace detail

class MockProvider : public Provider {
  public:
    MockProvider(std::vector<study::ParticipantRecord> participants,
                 std::vector<study::ScaleDefinition> scales, PersonaModel persona,
                 std::uint64_t seed)
        : participants_(std::move(participants)),
          scales_(std::move(scales)),
          persona_(persona),
          seed_(seed) {
        for (const auto& p : participants_) by_id_[p.participant_id] = &p;
        if (persona_.kind == PersonaModel::Kind::latent_correlation) precompute_latent();
    }

    CompletionResult complete_once(const CompletionRequest& request) override {
        CompletionResult result;
        result.status = Status::ok;

        const std::uint64_t unit_hash = detail::mix(
            seed_, detail::fnv1a(request.config_id + "|" + request.participant_id +
                                 "|" + request.prompt.unit_id));
        const double draw = detail::unit_uniform(unit_hash);
        if (draw < persona_.refusal_rate) {
            result.status = Status::refusal;
            result.raw_text = "I'm sorry, but I can't provide ratings for this request.";
            return result;
        }
        if (draw < persona_.refusal_rate + persona_.malformed_rate) {
            result.raw_text = "hmm... interesting question about feelings and fairness";
            return result;
        }

        nlohmann::json ratings;
        for (const auto& [scale_id, item_id] : request.prompt.covered_items)
            ratings[item_id] = rating(request, scale_id, item_id);
        result.raw_text = ratings.dump();
        return result;
    }

    // The synthetic rating the persona emits for one item, before any
    // refusal/malformed injection. Exposed so tests can compute the
    // generator-side oracle independently of the parsing pipeline.
    int rating(const CompletionRequest& request, const std::string& scale_id,
               const std::string& item_id) const {
        const auto* participant = by_id_.at(request.participant_id);
        const auto& scale = scale_by_id(scale_id);
        const auto& item = item_by_id(scale, item_id);

        int base = 0;
        switch (persona_.kind) {
            case PersonaModel::Kind::echo_human:
                base = *participant->response(scale_id, item_id);
                break;
            case PersonaModel::Kind::shift: {
                const int range = scale.score_max - scale.score_min;
                const double raw_shift = persona_.shift * range;
                base = *participant->response(scale_id, item_id) +
                       item_shift(scale, item_id, raw_shift);
                break;
            }
            case PersonaModel::Kind::latent_correlation:
                base = latent_ratings_.at(request.participant_id).at(item_id);
                break;
        }

        const double noise_sd = noise_for(request.sampling);
        if (noise_sd > 0.0) {
            const std::uint64_t h = detail::mix(
                seed_, detail::fnv1a(grid::setting_token(request.sampling) + "|" +
                                     request.participant_id + "|" + item_id));
            base += static_cast<int>(std::lround(noise_sd * detail::gauss(h)));
        }
        return std::clamp(base, item.response_min, item.response_max);
    }

    // The raw scale score the persona would emit for a participant with
    // zero noise; the generator-side ground truth for oracle checks.
    int emitted_raw_score(const std::string& participant_id,
                          const std::string& scale_id) const {
        const auto& scale = scale_by_id(scale_id);
        CompletionRequest probe;
        probe.participant_id = participant_id;
        std::vector<int> responses;
        for (const auto& item : scale.items)
            responses.push_back(rating(probe, scale_id, item.item_id));
        return study::score_scale(scale, responses);
    }

  private:
    double noise_for(const grid::SamplingSetting& setting) const {
        if (const double* t = std::get_if<double>(&setting))
            return persona_.noise_per_temp * *t;
        return std::get<grid::ReasoningEffort>(setting) == grid::ReasoningEffort::low
                   ? persona_.effort_low_noise
                   : persona_.effort_high_noise;
    }

    const study::ScaleDefinition& scale_by_id(const std::string& scale_id) const {
        for (const auto& scale : scales_)
            if (scale.scale_id == scale_id) return scale;
        throw std::invalid_argument("unknown scale: " + scale_id);
    }

    static const study::ItemDefinition& item_by_id(const study::ScaleDefinition& scale,
                                                   const std::string& item_id) {
        for (const auto& item : scale.items)
            if (item.item_id == item_id) return item;
        throw std::invalid_argument("unknown item: " + item_id);
    }

    // Distributes an integral raw-score shift over items so the scale
    // score moves by exactly the requested amount when no clamping binds.
    int item_shift(const study::ScaleDefinition& scale, const std::string& item_id,
                   double raw_shift) const {
        const long long total = std::llround(raw_shift);
        if (scale.scoring == study::ScoringRule::sum) {
            // spread as evenly as possible, first items take the remainder
            const long long n = static_cast<long long>(scale.items.size());
            long long per = total / n;
            long long remainder = total % n;
            for (std::size_t i = 0; i < scale.items.size(); ++i) {
                if (scale.items[i].item_id != item_id) continue;
                long long extra = 0;
                if (remainder > 0 && static_cast<long long>(i) < remainder) extra = 1;
                if (remainder < 0 && static_cast<long long>(i) < -remainder) extra = -1;
                return static_cast<int>(per + extra);
            }
            return 0;
        }
        // difference scale: shift the first item only
        return scale.items.front().item_id == item_id ? static_cast<int>(total) : 0;
    }

    void precompute_latent() {
        for (const auto& scale : scales_) {
            std::vector<double> raws;
            for (const auto& p : participants_) {
                std::vector<int> responses;
                for (const auto& item : scale.items)
                    responses.push_back(*p.response(scale.scale_id, item.item_id));
                raws.push_back(study::score_scale(scale, responses));
            }
            double mean = 0.0;
            for (double v : raws) mean += v;
            mean /= static_cast<double>(raws.size());
            double var = 0.0;
            for (double v : raws) var += (v - mean) * (v - mean);
            var /= std::max<double>(1.0, static_cast<double>(raws.size()) - 1.0);
            const double sd = std::sqrt(var);

            for (std::size_t i = 0; i < participants_.size(); ++i) {
                const auto& p = participants_[i];
                const double z_true = sd > 0.0 ? (raws[i] - mean) / sd : 0.0;
                const std::uint64_t h = detail::mix(
                    seed_, detail::fnv1a("latent|" + p.participant_id + "|" + scale.scale_id));
                const double latent =
                    persona_.rho * z_true +
                    std::sqrt(std::max(0.0, 1.0 - persona_.rho * persona_.rho)) *
                        detail::gauss(h);
                const int raw = std::clamp(
                    static_cast<int>(std::lround(mean + sd * latent)), scale.score_min,
                    scale.score_max);
                decompose(scale, raw, latent_ratings_[p.participant_id]);
            }
        }
    }

    // Writes item ratings whose scale score equals the requested raw value.
    static void decompose(const study::ScaleDefinition& scale, int raw,
                          std::map<std::string, int>& out) {
        if (scale.scoring == study::ScoringRule::sum) {
            int remaining = raw;
            for (const auto& item : scale.items) remaining -= item.response_min;
            for (const auto& item : scale.items) {
                const int headroom = item.response_max - item.response_min;
                const int take = std::min(remaining, headroom);
                out[item.item_id] = item.response_min + take;
                remaining -= take;
            }
        } else {
            const auto& first = scale.items[0];
            const auto& second = scale.items[1];
            const int lo = std::max(second.response_min, first.response_min - raw);
            const int hi = std::min(second.response_max, first.response_max - raw);
            const int second_value = std::clamp((lo + hi) / 2, lo, hi);
            out[second.item_id] = second_value;
            out[first.item_id] = raw + second_value;
        }
    }

    std::vector<study::ParticipantRecord> participants_;
    std::vector<study::ScaleDefinition> scales_;
    PersonaModel persona_;
    std::uint64_t seed_;
    std::map<std::string, const study::ParticipantRecord*> by_id_;
    std::map<std::string, std::map<std::string, int>> latent_ratings_;
};

}  // namespace silicon::gateway
