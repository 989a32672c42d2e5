// Copyright 2026 The ESG Agent Authors.
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

#include <fstream>
#include <set>
#include <sstream>

#include "esg/bench/harness.hpp"
#include "esg/common/error.hpp"
#include "esg/common/text.hpp"

namespace esg::bench {

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::kSchemaError, msg); }

std::string need_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string() || text::trim(j[key].get<std::string>()).empty()) {
    schema(std::string("\"") + key + "\" must be a non-empty string");
  }
  return j[key].get<std::string>();
}

}  // namespace

Question parse_question(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) schema("a question must be a JSON object");
  Question q;
  q.id = need_string(j, "id");
  if (!j.contains("level") || !j["level"].is_number_integer()) schema("\"level\" must be an integer");
  q.level = j["level"].get<int>();
  if (q.level < 1 || q.level > 3) schema("\"level\" must be 1, 2 or 3");
  q.qtype = eval::question_type_from_string(need_string(j, "qtype"));
  q.question = need_string(j, "question");

  if (j.contains("choices") && !j["choices"].is_null()) {
    if (!j["choices"].is_array() || j["choices"].empty()) schema("\"choices\" must be a non-empty list");
    std::vector<std::string> choices;
    for (const auto& c : j["choices"]) {
      if (!c.is_string()) schema("\"choices\" entries must be strings");
      choices.push_back(c.get<std::string>());
    }
    q.choices = std::move(choices);
  }
  if (j.contains("answer") && !j["answer"].is_null()) {
    if (j["answer"].is_string()) {
      q.answer = j["answer"].get<std::string>();
    } else if (j["answer"].is_number() || j["answer"].is_boolean()) {
      q.answer = j["answer"].dump();
    } else {
      schema("\"answer\" must be a string");
    }
  }

  if (q.level <= 2) {
    if (!q.answer || text::trim(*q.answer).empty()) schema("level " + std::to_string(q.level) + " requires \"answer\"");
    if (q.qtype == eval::QuestionType::kOpen) schema("levels 1 and 2 take closed question types");
  } else {
    if (q.qtype != eval::QuestionType::kOpen) schema("level 3 requires qtype \"open\"");
    if (q.answer) schema("level 3 questions carry no \"answer\"");
  }
  if (q.qtype == eval::QuestionType::kMc && !q.choices) schema("multiple-choice questions require \"choices\"");

  if (j.contains("pillar") && !j["pillar"].is_null()) {
    const auto p = j["pillar"].is_string() ? j["pillar"].get<std::string>() : std::string();
    if (p != "E" && p != "S" && p != "G") schema("\"pillar\" must be one of E, S, G");
    q.pillar = p[0];
  }
  if (j.contains("capabilities") && !j["capabilities"].is_null()) {
    if (!j["capabilities"].is_array()) schema("\"capabilities\" must be a list");
    for (const auto& c : j["capabilities"]) {
      if (!c.is_number_integer()) schema("capability ids must be integers");
      const int id = c.get<int>();
      if (id < 1 || id > 10) schema("capability id " + std::to_string(id) + " is outside 1..10");
      q.capabilities.push_back(id);
    }
  }
  if (j.contains("template") && j["template"].is_string()) q.template_name = j["template"].get<std::string>();

  if (j.contains("attachments") && !j["attachments"].is_null()) {
    if (!j["attachments"].is_array()) schema("\"attachments\" must be a list");
    for (const auto& a : j["attachments"]) {
      if (!a.is_string()) schema("attachment entries must be strings");
      fs::path p = a.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      p = p.lexically_normal();
      if (!fs::is_regular_file(p)) throw Error(ErrorKind::kMissingAttachment, "attachment not found: " + p.string());
      q.attachments.push_back(p);
    }
  }
  return q;
}

std::vector<Question> load_questions(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open question file " + path.string());
  const auto base = fs::absolute(path).parent_path();
  std::vector<Question> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto where = path.filename().string() + ":" + std::to_string(lineno) + ": ";
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      schema(where + "invalid JSON (" + e.what() + ")");
    }
    Question q;
    try {
      q = parse_question(j, base);
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.what());
    }
    if (!ids.insert(q.id).second) throw Error(ErrorKind::kDuplicateId, where + "duplicate question id '" + q.id + "'");
    out.push_back(std::move(q));
  }
  return out;
}

Json to_json(const Question& q) {
  Json j = {{"id", q.id}, {"level", q.level}, {"qtype", std::string(eval::to_string(q.qtype))}, {"question", q.question}};
  if (q.choices) j["choices"] = *q.choices;
  if (q.answer) j["answer"] = *q.answer;
  Json att = Json::array();
  for (const auto& a : q.attachments) att.push_back(a.string());
  j["attachments"] = att;
  if (q.pillar) j["pillar"] = std::string(1, *q.pillar);
  j["capabilities"] = q.capabilities;
  if (q.template_name) j["template"] = *q.template_name;
  return j;
}

std::string agent_prompt(const Question& q) {
  std::ostringstream s;
  s << q.question;
  if (q.choices) {
    s << "\n\nOptions:";
    char letter = 'A';
    for (const auto& c : *q.choices) s << "\n" << letter++ << ". " << c;
  }
  switch (q.qtype) {
    case eval::QuestionType::kTf: s << "\n\nAnswer with True or False."; break;
    case eval::QuestionType::kMc: s << "\n\nAnswer with the letter of the correct option."; break;
    case eval::QuestionType::kFib: s << "\n\nAnswer with the missing value only."; break;
    case eval::QuestionType::kOpen:
      s << "\n\nWrite the result as a markdown report with inline citations and a references section, "
           "using the report tool.";
      break;
  }
  return s.str();
}

}  // namespace esg::bench
