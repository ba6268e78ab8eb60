#pragma once

#define FRACVAR_VERSION "0.1.0"
