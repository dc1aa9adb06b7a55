# -*- coding: utf-8 -*-
"""
표현 계층 - 명령줄 인터페이스
"""
