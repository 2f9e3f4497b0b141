// Copyright 2026 The Spanlink Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spanlink/synthetic.h"

#include <algorithm>
#include <array>
#include <random>
#include <string_view>

#include "spanlink/errors.h"

namespace spanlink {

namespace {

struct DiseaseEntry {
  std::string_view cui;
  std::string_view preferred;
  std::string_view synonyms;  // '|'-separated
  std::string_view surface;   // how the text mentions it
};

// Ordered: training concepts, then zero-shot, then distractors.
constexpr std::array<DiseaseEntry, 40> kDiseases = {{
    {"MESH:D001943", "Breast Neoplasms", "Breast Cancer|Breast Tumors", "breast cancer"},
    {"MESH:D006505", "Hepatitis", "Liver Inflammation", "hepatitis"},
    {"MESH:D003920", "Diabetes Mellitus", "Diabetes", "diabetes mellitus"},
    {"MESH:D001249", "Asthma", "Bronchial Asthma", "asthma"},
    {"MESH:D015179", "Colorectal Neoplasms", "Colorectal Cancer", "colorectal cancer"},
    {"MESH:D009203", "Myocardial Infarction", "Heart Attack", "myocardial infarction"},
    {"MESH:D000544", "Alzheimer Disease", "Alzheimer Dementia", "alzheimer disease"},
    {"MESH:D010300", "Parkinson Disease", "Paralysis Agitans", "parkinson disease"},
    {"MESH:D003550", "Cystic Fibrosis", "Mucoviscidosis", "cystic fibrosis"},
    {"MESH:D006467", "Hemophilia A", "Factor VIII Deficiency", "hemophilia a"},
    {"MESH:D014376", "Tuberculosis", "Pulmonary Tuberculosis", "tuberculosis"},
    {"MESH:D008288", "Malaria", "Plasmodium Infections", "malaria"},
    {"MESH:D004827", "Epilepsy", "Seizure Disorder", "epilepsy"},
    {"MESH:D005901", "Glaucoma", "Ocular Hypertension", "glaucoma"},
    {"MESH:D011565", "Psoriasis", "Psoriases", "psoriasis"},
    {"MESH:D000740", "Anemia", "Anaemia", "anemia"},
    {"MESH:D011014", "Pneumonia", "Lung Inflammation", "pneumonia"},
    {"MESH:D008881", "Migraine Disorders", "Migraine", "migraine"},
    {"MESH:D010024", "Osteoporosis", "Bone Loss", "osteoporosis"},
    {"MESH:D007938", "Leukemia", "Leukaemia", "leukemia"},
    {"MESH:D010488", "Polyarteritis Nodosa", "Periarteritis Nodosa", "polyarteritis nodosa"},
    {"MESH:D012010", "Red-Cell Aplasia, Pure", "Pure Red-Cell Aplasias", "pure red cell aplasia"},
    {"MESH:D020758", "Hematomyelia", "Spinal Cord Hemorrhage", "hematomyelia"},
    {"MESH:D012507", "Sarcoidosis", "Besnier-Boeck Disease", "sarcoidosis"},
    {"MESH:D000686", "Amyloidosis", "Amyloid Disease", "amyloidosis"},
    {"MESH:D009157", "Myasthenia Gravis", "Erb-Goldflam Disease", "myasthenia gravis"},
    {"MESH:D012175", "Retinoblastoma", "Retinal Glioma", "retinoblastoma"},
    {"MESH:D012594", "Scleroderma, Systemic", "Systemic Sclerosis", "systemic sclerosis"},
    {"MESH:D006816", "Huntington Disease", "Huntington Chorea", "huntington disease"},
    {"MESH:D009080", "Mucocutaneous Lymph Node Syndrome", "Kawasaki Disease", "kawasaki disease"},
    {"MESH:D006073", "Gout", "Gouty Arthritis", "gout"},
    {"MESH:D012279", "Rickets", "Rachitis", "rickets"},
    {"MESH:D012614", "Scurvy", "Ascorbic Acid Deficiency", "scurvy"},
    {"MESH:D002771", "Cholera", "Asiatic Cholera", "cholera"},
    {"MESH:D013742", "Tetanus", "Lockjaw", "tetanus"},
    {"MESH:D011818", "Rabies", "Hydrophobia", "rabies"},
    {"MESH:D007918", "Leprosy", "Hansen Disease", "leprosy"},
    {"MESH:D014435", "Typhoid Fever", "Enteric Fever", "typhoid fever"},
    {"MESH:D008457", "Measles", "Rubeola", "measles"},
    {"MESH:D009107", "Mumps", "Epidemic Parotitis", "mumps"},
}};

constexpr std::array<std::string_view, 4> kTitleTemplates = {
    "Clinical features of {} in adults.",
    "A case of {} with unusual presentation.",
    "Genetic analysis of patients with {}.",
    "Risk factors for {} in a population cohort.",
};

constexpr std::array<std::string_view, 6> kAbstractTemplates = {
    "Patients with {} were enrolled in this study.",
    "We report a case of {} in a young woman.",
    "The incidence of {} increased after treatment.",
    "Treatment outcomes of {} remain poor.",
    "A novel mutation was found in a family with {}.",
    "Risk factors for {} were evaluated in a large cohort.",
};

// Fills the template and returns the offset of the slot.
std::string Fill(std::string_view tmpl, std::string_view surface,
                 size_t *slot) {
  size_t pos = tmpl.find("{}");
  *slot = pos;
  std::string out(tmpl.substr(0, pos));
  out += surface;
  out += tmpl.substr(pos + 2);
  return out;
}

GoldMention MakeMention(const std::string &doc_id, size_t start,
                        const DiseaseEntry &e) {
  GoldMention m;
  m.doc_id = doc_id;
  m.char_start = start;
  m.char_end = start + e.surface.size();
  m.surface = std::string(e.surface);
  m.type = "Disease";
  m.raw_concept = std::string(e.cui);
  m.concept_ids = {m.raw_concept};
  return m;
}

AnnotatedDocument MakeDocument(const std::string &doc_id,
                               const DiseaseEntry &title_disease,
                               const DiseaseEntry &abstract_disease,
                               std::mt19937_64 &rng) {
  std::uniform_int_distribution<size_t> pick_title(0, kTitleTemplates.size() - 1);
  std::uniform_int_distribution<size_t> pick_abs(0, kAbstractTemplates.size() - 1);
  AnnotatedDocument d;
  d.doc.doc_id = doc_id;
  size_t slot = 0;
  d.doc.title = Fill(kTitleTemplates[pick_title(rng)], title_disease.surface,
                     &slot);
  d.mentions.push_back(MakeMention(doc_id, slot, title_disease));
  d.doc.abstract_text = Fill(kAbstractTemplates[pick_abs(rng)],
                             abstract_disease.surface, &slot);
  d.mentions.push_back(MakeMention(doc_id, d.doc.AbstractOffset() + slot,
                                   abstract_disease));
  return d;
}

}  // namespace

SyntheticSuite MakeSyntheticSuite(const SyntheticOptions &o) {
  const size_t zs_begin = o.train_concepts;
  const size_t zs_end = zs_begin + o.zero_shot_concepts;
  const size_t total = zs_end + o.distractor_concepts;
  if (o.train_concepts == 0 || total > kDiseases.size()) {
    throw ValidationError("synthetic suite supports at most " +
                          std::to_string(kDiseases.size()) + " concepts");
  }
  std::mt19937_64 rng(o.seed);
  SyntheticSuite suite;
  suite.medic_tsv =
      "# DiseaseName\tDiseaseID\tAltDiseaseIDs\tDefinition\tParentIDs\t"
      "TreeNumbers\tParentTreeNumbers\tSynonyms\n";
  for (size_t i = 0; i < total; ++i) {
    const DiseaseEntry &e = kDiseases[i];
    suite.medic_tsv += std::string(e.preferred) + "\t" + std::string(e.cui) +
                       "\t\t\t\t\t\t" + std::string(e.synonyms) + "\n";
  }

  // Training: each concept appears train_mentions_per_concept times, two
  // mentions per document.
  std::vector<size_t> train_order;
  for (size_t r = 0; r < o.train_mentions_per_concept; ++r) {
    for (size_t c = 0; c < o.train_concepts; ++c) train_order.push_back(c);
  }
  std::shuffle(train_order.begin(), train_order.end(), rng);
  if (train_order.size() % 2 == 1) train_order.push_back(train_order.front());
  for (size_t i = 0; i + 1 < train_order.size(); i += 2) {
    suite.train.push_back(MakeDocument("9" + std::to_string(1000 + i / 2),
                                       kDiseases[train_order[i]],
                                       kDiseases[train_order[i + 1]], rng));
  }

  // Test: a zero-shot concept in the title, a training concept in the
  // abstract while both last; leftovers pair with themselves.
  std::uniform_int_distribution<size_t> pick_train(0, o.train_concepts - 1);
  size_t n_docs = std::max(o.zero_shot_concepts, o.test_standard_sentences);
  for (size_t i = 0; i < n_docs; ++i) {
    const DiseaseEntry &first = i < o.zero_shot_concepts
                                    ? kDiseases[zs_begin + i]
                                    : kDiseases[pick_train(rng)];
    const DiseaseEntry &second = i < o.test_standard_sentences
                                     ? kDiseases[pick_train(rng)]
                                     : kDiseases[zs_begin + (i % std::max<size_t>(1, o.zero_shot_concepts))];
    suite.test.push_back(
        MakeDocument("8" + std::to_string(1000 + i), first, second, rng));
  }
  for (size_t i = zs_begin; i < zs_end; ++i) {
    suite.zero_shot_cuis.insert(std::string(kDiseases[i].cui));
  }
  return suite;
}

}  // namespace spanlink
