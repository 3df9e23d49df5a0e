#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "semdelta/corpus.hpp"
#include "semdelta/error.hpp"

namespace semdelta {

inline constexpr std::string_view kFollowUpMessage = "Continue the conversation.";

struct GenerationConfig {
  std::string model = "gpt-4o-mini";
  std::string system_prompt = "You are a helpful assistant.";
  // May contain "{topic}", substituted once per topic.
  std::string user_prompt_template = "Choose a topic of discussion.";
  std::vector<std::string> topics;
  std::size_t turns = 1;  // assistant turns collected per dialogue
  double temperature = 1.0;
  std::size_t max_retries = 3;
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  // Source tag and id prefix of generated records; defaults to the model.
  std::string source;

  // Throws Error{kInvalidConfig}.
  void validate() const;
};

// One row of a prompts file: (cell_id, system_prompt, user_prompt_template).
struct PromptVariant {
  std::string cell_id;
  std::string system_prompt;
  std::string user_prompt_template;
};

// Reads the prompts TSV. '#' lines and blank lines are skipped, an optional
// "cell_id<TAB>system_prompt<TAB>user_prompt_template" header is allowed,
// and fields may use the escapes \n, \t and \\.
std::vector<PromptVariant> load_prompt_matrix(std::string_view bytes);

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Sends one chat-completions request body and returns the raw response.
// Implementations throw Error{kEndpointUnreachable} when no HTTP exchange
// took place. Must be safe to call from several threads.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual HttpResponse post(const std::string& json_body) = 0;
};

// OpenAI-compatible HTTP(S) endpoint with bearer-token auth.
class HttpChatTransport final : public ChatTransport {
 public:
  HttpChatTransport(std::string endpoint_url, std::string api_key,
                    std::chrono::seconds timeout = std::chrono::seconds(120));
  HttpResponse post(const std::string& json_body) override;

 private:
  std::string base_;
  std::string path_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

// In-process stand-in for an endpoint; never touches the network. The
// responder sees each parsed request and returns the raw response.
class StubChatTransport final : public ChatTransport {
 public:
  using Responder = std::function<HttpResponse(const nlohmann::json& request)>;

  explicit StubChatTransport(Responder responder);
  HttpResponse post(const std::string& json_body) override;

  std::size_t calls() const noexcept { return calls_.load(); }

  // Well-formed chat-completions response carrying `content`.
  static HttpResponse reply(std::string_view content);
  // Deterministic canned assistant replies keyed on the conversation so far.
  static Responder canned();

 private:
  Responder responder_;
  std::mutex mutex_;
  std::atomic<std::size_t> calls_{0};
};

struct GenerationFailure {
  std::size_t cell_index = 0;
  std::size_t replica = 0;
  std::string record_id;  // id the record would have had
  ErrorCode code = ErrorCode::kMalformedResponse;
  std::string message;
};

struct GenerationResult {
  std::vector<DialogueRecord> records;  // ordered by (cell, replica)
  std::vector<GenerationFailure> failures;
  std::size_t cells = 0;
};

struct GenerationOptions {
  std::size_t max_in_flight = 4;
  std::chrono::milliseconds backoff_base{1000};
  std::uint64_t jitter_seed = 0x5eed;
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to sleep_for
  std::function<std::string()> now;                      // ISO-8601 UTC timestamp
};

// Runs every (topic x template) cell of `config` `count_per_cell` times.
// Failed dialogues become entries in `failures`; nothing here throws for a
// per-request problem. Throws Error{kInvalidConfig} before any request when
// the configuration is unusable.
GenerationResult generate_dialogues(const GenerationConfig& config, std::size_t count_per_cell,
                                    ChatTransport& transport,
                                    const GenerationOptions& options = {});

// Same, for a prompt matrix: each variant overrides the config's system
// prompt and template, and its cells follow the previous variant's.
GenerationResult generate_dialogues(const GenerationConfig& config,
                                    const std::vector<PromptVariant>& variants,
                                    std::size_t count_per_cell, ChatTransport& transport,
                                    const GenerationOptions& options = {});

// Builds the HTTP transport from the key in config.api_key_env.
// Throws Error{kAuthMissing} when the variable is unset or empty.
std::unique_ptr<ChatTransport> make_http_transport(const GenerationConfig& config);

// Exposed for tests: choices[0].message.content, or Error{kMalformedResponse}.
std::string extract_assistant_message(std::string_view response_body);

std::string fnv1a_hex(std::string_view text);

}  // namespace semdelta
