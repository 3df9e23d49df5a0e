#include "semdelta/genclient.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <random>
#include <thread>

#include "semdelta/utf8.hpp"

namespace semdelta {

namespace {

constexpr std::string_view kTopicPlaceholder = "{topic}";

struct Cell {
  std::string variant_id;
  std::string system_prompt;
  std::string user_prompt;
  std::string topic;
};

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

void append_cells(std::vector<Cell>& cells, const GenerationConfig& config,
                  const std::string& variant_id, const std::string& system_prompt,
                  const std::string& user_template) {
  if (user_template.find(kTopicPlaceholder) == std::string::npos) {
    cells.push_back({variant_id, system_prompt, user_template, {}});
    return;
  }
  if (config.topics.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "prompt '" + variant_id + "' uses {topic} but no topics were given");
  }
  for (const auto& topic : config.topics) {
    cells.push_back({variant_id, system_prompt, replace_all(user_template, kTopicPlaceholder, topic),
                     topic});
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string unescape_field(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == '\\' && i + 1 < field.size()) {
      const char next = field[i + 1];
      if (next == 'n' || next == 't' || next == '\\') {
        out.push_back(next == 'n' ? '\n' : next == 't' ? '\t' : '\\');
        ++i;
        continue;
      }
    }
    out.push_back(field[i]);
  }
  return out;
}

class Generator {
 public:
  Generator(const GenerationConfig& config, std::vector<Cell> cells, std::size_t count,
            ChatTransport& transport, const GenerationOptions& options)
      : config_(config),
        cells_(std::move(cells)),
        count_(count),
        transport_(transport),
        options_(options),
        source_(config.source.empty() ? config.model : config.source) {
    if (!options_.sleep) {
      options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
    if (!options_.now) {
      options_.now = utc_timestamp;
    }
  }

  GenerationResult run() {
    const std::size_t jobs = cells_.size() * count_;
    std::vector<std::optional<DialogueRecord>> records(jobs);
    std::vector<std::optional<GenerationFailure>> failures(jobs);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t job = next++; job < jobs; job = next++) {
        try {
          records[job] = run_job(job);
        } catch (const Error& e) {
          failures[job] = GenerationFailure{job / count_, job % count_, record_id(job), e.code(),
                                            e.detail()};
        } catch (const std::exception& e) {
          failures[job] = GenerationFailure{job / count_, job % count_, record_id(job),
                                            ErrorCode::kMalformedResponse, e.what()};
        }
      }
    };
    const std::size_t threads = std::clamp<std::size_t>(options_.max_in_flight, 1, std::max<std::size_t>(jobs, 1));
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    GenerationResult result;
    result.cells = cells_.size();
    for (std::size_t job = 0; job < jobs; ++job) {
      if (records[job]) result.records.push_back(std::move(*records[job]));
      if (failures[job]) result.failures.push_back(std::move(*failures[job]));
    }
    return result;
  }

 private:
  std::string record_id(std::size_t job) const { return make_record_id(source_, job); }

  DialogueRecord run_job(std::size_t job) {
    const Cell& cell = cells_[job / count_];
    std::mt19937_64 rng(options_.jitter_seed ^ (0x9e3779b97f4a7c15ULL * (job + 1)));

    nlohmann::json messages = nlohmann::json::array();
    messages.push_back({{"role", "system"}, {"content", cell.system_prompt}});
    messages.push_back({{"role", "user"}, {"content", cell.user_prompt}});

    std::string text;
    for (std::size_t turn = 0; turn < config_.turns; ++turn) {
      const nlohmann::json body = {
          {"model", config_.model}, {"messages", messages}, {"temperature", config_.temperature}};
      const std::string reply = extract_assistant_message(send(body.dump(), rng));
      if (!text.empty()) text.push_back('\n');
      text += reply;
      messages.push_back({{"role", "assistant"}, {"content", reply}});
      messages.push_back({{"role", "user"}, {"content", std::string(kFollowUpMessage)}});
    }

    DialogueRecord record;
    record.id = record_id(job);
    record.label = Label::kAi;
    record.source = source_;
    record.text = std::move(text);
    record.meta["model"] = config_.model;
    record.meta["system_prompt_hash"] = fnv1a_hex(cell.system_prompt);
    record.meta["user_prompt"] = cell.user_prompt;
    record.meta["cell_id"] = cell.variant_id;
    record.meta["replica"] = std::to_string(job % count_);
    record.meta["turns"] = std::to_string(config_.turns);
    record.meta["timestamp"] = options_.now();
    if (!cell.topic.empty()) record.meta["topic"] = cell.topic;
    return record;
  }

  // Retries 429, 5xx and transport failures with exponential backoff
  // (base * 2^attempt plus up to one base of jitter).
  std::string send(const std::string& body, std::mt19937_64& rng) {
    std::optional<Error> last;
    for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        const double jitter = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const auto base = options_.backoff_base.count();
        const auto delay = base * (1LL << std::min<std::size_t>(attempt - 1, 20)) +
                           static_cast<long long>(jitter * static_cast<double>(base));
        options_.sleep(std::chrono::milliseconds(delay));
      }
      HttpResponse response;
      try {
        response = transport_.post(body);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEndpointUnreachable) throw;
        last = e;
        continue;
      }
      const int status = response.status;
      if (status >= 200 && status < 300) return response.body;
      if (status == 429) {
        last = Error(ErrorCode::kRateLimited, "HTTP 429 after " + std::to_string(attempt + 1) + " attempt(s)");
        continue;
      }
      if (status >= 500) {
        last = Error(ErrorCode::kEndpointUnreachable, "HTTP " + std::to_string(status));
        continue;
      }
      if (status == 401 || status == 403) {
        throw Error(ErrorCode::kAuthMissing, "endpoint rejected credentials (HTTP " +
                                                 std::to_string(status) + ")");
      }
      throw Error(ErrorCode::kEndpointUnreachable, "HTTP " + std::to_string(status) + ": " +
                                                       response.body.substr(0, 200));
    }
    throw *last;
  }

  const GenerationConfig& config_;
  std::vector<Cell> cells_;
  std::size_t count_;
  ChatTransport& transport_;
  GenerationOptions options_;
  std::string source_;
};

GenerationResult run_generation(const GenerationConfig& config, std::vector<Cell> cells,
                                std::size_t count_per_cell, ChatTransport& transport,
                                const GenerationOptions& options) {
  if (count_per_cell == 0) {
    throw Error(ErrorCode::kInvalidConfig, "count per cell must be positive");
  }
  return Generator(config, std::move(cells), count_per_cell, transport, options).run();
}

}  // namespace

void GenerationConfig::validate() const {
  auto invalid = [](const std::string& why) { return Error(ErrorCode::kInvalidConfig, why); };
  if (model.empty()) throw invalid("model must be non-empty");
  if (turns < 1) throw invalid("turns must be at least 1");
  if (!(temperature >= 0.0)) throw invalid("temperature must be >= 0");
  if (user_prompt_template.find(kTopicPlaceholder) != std::string::npos && topics.empty()) {
    throw invalid("user prompt template uses {topic} but no topics were given");
  }
}

std::vector<PromptVariant> load_prompt_matrix(std::string_view bytes) {
  std::vector<PromptVariant> variants;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < bytes.size()) {
    auto end = bytes.find('\n', start);
    if (end == std::string_view::npos) end = bytes.size();
    auto line = bytes.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line == "cell_id\tsystem_prompt\tuser_prompt_template") continue;

    std::vector<std::string_view> fields;
    std::size_t field_start = 0;
    while (true) {
      const auto tab = line.find('\t', field_start);
      fields.push_back(line.substr(field_start, tab - field_start));
      if (tab == std::string_view::npos) break;
      field_start = tab + 1;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[2].empty()) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected cell_id, system_prompt and user_prompt_template", line_no);
    }
    variants.push_back({std::string(fields[0]), unescape_field(fields[1]), unescape_field(fields[2])});
  }
  if (variants.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "prompts file has no rows");
  }
  return variants;
}

HttpChatTransport::HttpChatTransport(std::string endpoint_url, std::string api_key,
                                     std::chrono::seconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  const auto scheme_end = endpoint_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidConfig, "endpoint URL '" + endpoint_url + "' has no scheme");
  }
  const auto path_start = endpoint_url.find('/', scheme_end + 3);
  base_ = endpoint_url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint_url.substr(path_start);
}

HttpResponse HttpChatTransport::post(const std::string& json_body) {
  httplib::Client client(base_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  auto res = client.Post(path_, headers, json_body, "application/json");
  if (!res) {
    throw Error(ErrorCode::kEndpointUnreachable,
                base_ + path_ + ": " + httplib::to_string(res.error()));
  }
  return HttpResponse{res->status, res->body};
}

StubChatTransport::StubChatTransport(Responder responder) : responder_(std::move(responder)) {}

HttpResponse StubChatTransport::post(const std::string& json_body) {
  ++calls_;
  const auto request = nlohmann::json::parse(json_body);
  std::lock_guard lock(mutex_);
  return responder_(request);
}

HttpResponse StubChatTransport::reply(std::string_view content) {
  const nlohmann::json body = {
      {"id", "stub"},
      {"object", "chat.completion"},
      {"choices",
       {{{"index", 0},
         {"message", {{"role", "assistant"}, {"content", std::string(content)}}},
         {"finish_reason", "stop"}}}}};
  return HttpResponse{200, body.dump()};
}

StubChatTransport::Responder StubChatTransport::canned() {
  return [](const nlohmann::json& request) {
    static const std::vector<std::string_view> replies = {
        "Coffee is a wonderful start to breakfast. A good coffee with bread and cheese makes "
        "breakfast, lunch and dinner better, and soup or pasta is great food too.",
        "Music brings joy. A song on the guitar or piano, a drum rhythm at a concert, and a "
        "band playing a melody from a new album all make a song feel alive.",
        "Technology keeps changing. The computer, the phone, the internet and every network run "
        "software and code, and machine learning turns data into a better algorithm.",
        "Travel is about the journey. A flight from the airport, a hotel near the beach, a "
        "train trip with luggage and a passport make a vacation memorable.",
        "The weather shapes the day. Rain, snow, wind and a storm cloud bring cold and thunder, "
        "while the sun after the fog makes the weather hot again.",
        "A healthy life needs care. A doctor or a nurse at the hospital can cure a fever or "
        "pain with medicine, and health matters when you feel sick.",
    };
    std::string key;
    for (const auto& message : request.at("messages")) {
      key += message.at("content").get<std::string>();
      key.push_back('\n');
    }
    const auto hash = std::stoull(fnv1a_hex(key), nullptr, 16);
    return reply(replies[hash % replies.size()]);
  };
}

GenerationResult generate_dialogues(const GenerationConfig& config, std::size_t count_per_cell,
                                    ChatTransport& transport, const GenerationOptions& options) {
  config.validate();
  std::vector<Cell> cells;
  append_cells(cells, config, "default", config.system_prompt, config.user_prompt_template);
  return run_generation(config, std::move(cells), count_per_cell, transport, options);
}

GenerationResult generate_dialogues(const GenerationConfig& config,
                                    const std::vector<PromptVariant>& variants,
                                    std::size_t count_per_cell, ChatTransport& transport,
                                    const GenerationOptions& options) {
  GenerationConfig base = config;
  base.user_prompt_template = "-";  // variants supply the templates
  base.validate();
  if (variants.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "no prompt variants given");
  }
  std::vector<Cell> cells;
  for (const auto& variant : variants) {
    append_cells(cells, config, variant.cell_id, variant.system_prompt,
                 variant.user_prompt_template);
  }
  return run_generation(config, std::move(cells), count_per_cell, transport, options);
}

std::unique_ptr<ChatTransport> make_http_transport(const GenerationConfig& config) {
  const char* key = std::getenv(config.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::kAuthMissing,
                "environment variable " + config.api_key_env + " is not set");
  }
  return std::make_unique<HttpChatTransport>(config.endpoint_url, key);
}

std::string extract_assistant_message(std::string_view response_body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(response_body);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::kMalformedResponse, "response is not JSON");
  }
  const auto* content = [&]() -> const nlohmann::json* {
    if (!j.is_object() || !j.contains("choices") || !j["choices"].is_array() ||
        j["choices"].empty()) {
      return nullptr;
    }
    const auto& choice = j["choices"][0];
    if (!choice.is_object() || !choice.contains("message") || !choice["message"].is_object()) {
      return nullptr;
    }
    const auto& message = choice["message"];
    if (!message.contains("content") || !message["content"].is_string()) return nullptr;
    return &message["content"];
  }();
  if (content == nullptr) {
    throw Error(ErrorCode::kMalformedResponse, "response has no choices[0].message.content");
  }
  auto text = content->get<std::string>();
  if (utf8::is_blank(text)) {
    throw Error(ErrorCode::kMalformedResponse, "assistant message is empty");
  }
  return text;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace semdelta
