#! /usr/bin/python

import hetcache.cli

hetcache.cli.hetcache_tool()
