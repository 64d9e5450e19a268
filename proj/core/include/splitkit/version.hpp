#pragma once

#define SPLITKIT_VERSION_MAJOR 0
#define SPLITKIT_VERSION_MINOR 1
#define SPLITKIT_VERSION_PATCH 0
#define SPLITKIT_VERSION "0.1.0"
