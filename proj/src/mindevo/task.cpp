#include "mindevo/task.hpp"

#include "mindevo/common/errors.hpp"

namespace mindevo {

const char* to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kTrip: return "trip";
    case TaskKind::kMeeting: return "meeting";
    case TaskKind::kSteg: return "steg";
    case TaskKind::kCustom: return "custom";
  }
  return "custom";
}

TaskKind task_kind_from_string(std::string_view name) {
  if (name == "trip") return TaskKind::kTrip;
  if (name == "meeting") return TaskKind::kMeeting;
  if (name == "steg" || name == "stegpoet") return TaskKind::kSteg;
  throw ConfigError("unknown task kind: " + std::string(name));
}

}  // namespace mindevo
