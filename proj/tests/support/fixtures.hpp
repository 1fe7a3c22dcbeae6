#pragma once

// Deterministic synthetic human roster for tests: 85 participants with
// complete demographics and correlated BJW / Gut Feelings responses.

#include <string>
#include <vector>

#include "silicon/study_model.hpp"

namespace fixtures {

inline std::vector<silicon::study::ParticipantRecord> synthetic_participants(int n = 85) {
    using silicon::study::ParticipantRecord;
    std::vector<ParticipantRecord> participants;
    const char* genders[3] = {"woman", "man", "non-binary"};
    const char* educations[4] = {"high school", "bachelor's degree", "master's degree",
                                 "doctorate"};
    const char* incomes[3] = {"under $25,000", "$25,000 - $74,999", "$75,000 or more"};
    const char* politics[5] = {"very liberal", "liberal", "moderate", "conservative",
                               "very conservative"};
    for (int i = 0; i < n; ++i) {
        ParticipantRecord p;
        p.participant_id = "p" + std::to_string(i + 1);
        p.demographics.age = 18 + (i * 7) % 55;
        p.demographics.gender = genders[i % 3];
        p.demographics.country_residence = "United States";
        p.demographics.education = educations[i % 4];
        p.demographics.ethnicity = (i % 2 == 0) ? "White" : "Black or African American";
        p.demographics.income = incomes[i % 3];
        p.demographics.political_identity = politics[i % 5];
        // a latent trait drives both scales so they correlate
        const int trait = (i * 13) % 29;  // 0..28
        for (int item = 1; item <= 6; ++item) {
            const int wiggle = ((i * 31 + item * 17) % 5) - 2;
            int v = 1 + (trait + wiggle * 3 + 14) * 5 / 33;
            if (v < 1) v = 1;
            if (v > 6) v = 6;
            p.responses[{"bjw", "bjw_" + std::to_string(item)}] = v;
        }
        const int gf_wiggle = ((i * 23) % 7) - 3;
        int ea = 3 + (trait + 14) * 7 / 43 + gf_wiggle;
        if (ea < 1) ea = 1;
        if (ea > 10) ea = 10;
        int aa = 5 + ((i * 11) % 5) - 2;
        if (aa < 1) aa = 1;
        if (aa > 10) aa = 10;
        p.responses[{"gf", "gf_european_americans"}] = ea;
        p.responses[{"gf", "gf_african_americans"}] = aa;
        participants.push_back(std::move(p));
    }
    return participants;
}

inline std::string participants_to_csv(
    const std::vector<silicon::study::ParticipantRecord>& participants) {
    std::string csv =
        "participant_id,age,gender,country_residence,education,ethnicity,income,"
        "political_identity,bjw_1,bjw_2,bjw_3,bjw_4,bjw_5,bjw_6,"
        "gf_african_americans,gf_european_americans\n";
    for (const auto& p : participants) {
        csv += p.participant_id + "," + std::to_string(p.demographics.age) + "," +
               p.demographics.gender + "," + p.demographics.country_residence + "," +
               p.demographics.education + "," + p.demographics.ethnicity + "," +
               "\"" + p.demographics.income + "\"," + p.demographics.political_identity;
        for (int item = 1; item <= 6; ++item)
            csv += "," + std::to_string(*p.response("bjw", "bjw_" + std::to_string(item)));
        csv += "," + std::to_string(*p.response("gf", "gf_african_americans"));
        csv += "," + std::to_string(*p.response("gf", "gf_european_americans"));
        csv += "\n";
    }
    return csv;
}

inline std::string synthetic_csv(int n = 85) {
    return participants_to_csv(synthetic_participants(n));
}

}  // namespace fixtures
